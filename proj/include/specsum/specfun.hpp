// Complex special functions: log-gamma (Lanczos) with stable reflection,
// Stirling approximants, Euler-Maclaurin zeta / Hurwitz zeta, Dirichlet
// L-functions of real characters, the exponential integral, Bessel J of
// integer order, and Bessel J/K of imaginary order via oscillatory
// Mehler-Sonine integrals with integration-by-parts tails.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "specsum/arith.hpp"
#include "specsum/common.hpp"
#include "specsum/quadrature.hpp"

namespace specsum::specfun {

namespace detail {

inline constexpr double kLanczosG = 7.0;
inline constexpr double kLanczosP[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7};

// log sin(pi z), stable for large |Im z|.  The branch may differ from the
// principal one by 2*pi*i*k; differences of log-gammas are only ever
// exponentiated, so a constant 2*pi*i offset is harmless.
inline cplx log_sin_pi(cplx z) {
    if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
    const cplx ipz = cplx(0.0, kPi) * z;
    // sin(pi z) = (i/2) e^{-i pi z} (1 - e^{2 pi i z})
    const cplx log_i_half(-std::log(2.0), kPi / 2.0);
    return -ipz + log_i_half + std::log(1.0 - std::exp(2.0 * ipz));
}

inline cplx lgamma_right(cplx z) {
    // Re z >= 0.5
    z -= 1.0;
    cplx x = kLanczosP[0];
    for (int i = 1; i < 9; ++i) x += kLanczosP[i] / (z + static_cast<double>(i));
    cplx t = z + (kLanczosG + 0.5);
    return 0.5 * std::log(kTwoPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace detail

inline bool near_nonpositive_integer(cplx z, double tol = 1e-13) {
    if (std::abs(z.imag()) > tol) return false;
    double r = std::round(z.real());
    return r <= 0.0 && std::abs(z.real() - r) <= tol;
}

/// log Gamma(z); branch differences of 2*pi*i*k possible left of Re z = 1/2.
inline cplx log_gamma(cplx z) {
    if (near_nonpositive_integer(z))
        throw std::domain_error("log_gamma: pole at non-positive integer");
    if (z.real() >= 0.5) return detail::lgamma_right(z);
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(kPi) - detail::log_sin_pi(z) - detail::lgamma_right(1.0 - z);
}

/// Euler Gamma function.
inline cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

/// log of Gamma_R(s) = pi^{-s/2} Gamma(s/2).
inline cplx log_gamma_R(cplx s) {
    if (near_nonpositive_integer(0.5 * s))
        throw std::domain_error("gamma_R: pole at non-positive even integer");
    return -0.5 * s * std::log(kPi) + log_gamma(0.5 * s);
}

inline cplx gamma_R(cplx s) { return std::exp(log_gamma_R(s)); }

/// Large-t approximation of Gamma(sigma + i*gamma + i*t):
///   sqrt(2 pi) t^{sigma-1/2+i gamma+i t} exp(i pi/2 (sigma-1/2+i gamma+i t) - i t)
/// with correction factors exp(c1/t [+ c2/t^2]) at orders 1 and 2, the c_n
/// polynomial in sigma and gamma.
inline cplx stirling_log_gamma(double sigma, double gamma_im, double t, int order) {
    if (t < 1.0) throw std::domain_error("stirling_gamma: requires t >= 1");
    if (!(sigma > 0.0)) throw std::domain_error("stirling_gamma: requires sigma > 0");
    if (!(gamma_im < t)) throw std::domain_error("stirling_gamma: requires gamma < t");
    if (order < 0 || order > 2)
        throw std::invalid_argument("stirling_gamma: order must be 0, 1 or 2");
    const cplx i(0.0, 1.0);
    const cplx a(sigma - 0.5, gamma_im + t);
    cplx log_base = 0.5 * std::log(kTwoPi) + a * std::log(t) + i * (kPi / 2.0) * a - i * t;
    if (order >= 1) {
        const cplx u(gamma_im, -sigma);  // gamma - i*sigma
        const cplx c1 = -0.5 * u + 0.5 * i * u * u - i / 12.0;
        log_base += c1 / t;
        if (order >= 2) {
            const cplx c2 = 0.25 * u * u - i * u * u * u / 6.0 + i * u / 12.0;
            log_base += c2 / (t * t);
        }
    }
    return log_base;
}

inline cplx stirling_gamma(double sigma, double gamma_im, double t, int order) {
    return std::exp(stirling_log_gamma(sigma, gamma_im, t, order));
}

// ---------------------------------------------------------------------------
// Euler-Maclaurin machinery.

namespace detail {
// B_2, B_4, ..., B_24
inline constexpr double kBernoulli2j[12] = {
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0,
    7.0 / 6.0, -3617.0 / 510.0, 43867.0 / 798.0, -174611.0 / 330.0, 854513.0 / 138.0,
    -236364091.0 / 2730.0};
}

/// Hurwitz zeta for 0 < a <= 1 by Euler-Maclaurin with tail order 12.
inline cplx hurwitz_zeta(cplx s, double a) {
    if (!(a > 0.0 && a <= 1.0)) throw std::domain_error("hurwitz_zeta: need 0 < a <= 1");
    if (std::abs(s - cplx(1.0, 0.0)) < 1e-13) throw std::domain_error("hurwitz_zeta: pole at s = 1");
    if (s.real() < -24.0) throw std::domain_error("hurwitz_zeta: Re s below supported window");
    const int N = std::max<int>(20, static_cast<int>(std::ceil(2.0 * std::abs(s.imag()))));
    KahanSum<cplx> acc;
    for (int k = 0; k < N; ++k) acc.add(std::exp(-s * std::log(static_cast<double>(k) + a)));
    const double Na = N + a;
    const cplx lp = std::log(Na);
    acc.add(std::exp((1.0 - s) * lp) / (s - 1.0));
    const cplx Nms = std::exp(-s * lp);
    acc.add(0.5 * Nms);
    // sum_j B_{2j}/(2j)! * s(s+1)...(s+2j-2) * (N+a)^{-s-2j+1}
    cplx poch = s;                 // rising factorial, 2j-1 factors
    cplx pw = Nms / Na;            // (N+a)^{-s-1}
    double fact = 2.0;             // (2j)!
    for (int j = 1; j <= 12; ++j) {
        acc.add(detail::kBernoulli2j[j - 1] / fact * poch * pw);
        poch *= (s + cplx(2.0 * j - 1.0)) * (s + cplx(2.0 * j));
        pw /= Na * Na;
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
    }
    return acc.value();
}

/// Riemann zeta by Euler-Maclaurin.
inline cplx zeta(cplx s) {
    if (std::abs(s - cplx(1.0, 0.0)) < 1e-13) throw std::domain_error("zeta: pole at s = 1");
    return hurwitz_zeta(s, 1.0);
}

/// Digamma for real x > 0.
inline double digamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("digamma: requires x > 0");
    double acc = 0.0;
    while (x < 12.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    double inv2 = 1.0 / (x * x);
    double tail = 0.0, p = inv2;
    for (int j = 1; j <= 6; ++j) {
        tail += detail::kBernoulli2j[j - 1] / (2.0 * j) * p;
        p *= inv2;
    }
    return acc + std::log(x) - 0.5 / x - tail;
}

/// Dirichlet L(s, chi) for the real character chi of prime modulus d == 1 mod 4,
/// via Hurwitz zeta: L(s,chi) = d^{-s} sum_a chi(a) zeta_H(s, a/d).
inline cplx dirichlet_L(cplx s, const arith::QuadraticCharacter& chi) {
    const std::int64_t d = chi.modulus();
    if (std::abs(s - cplx(1.0, 0.0)) < 1e-10) {
        // polar parts cancel (sum chi = 0); use zeta_H(s,a) = 1/(s-1) - psi(a) + O(s-1)
        double v = 0.0;
        for (std::int64_t a = 1; a < d; ++a)
            v -= chi(a) * digamma(static_cast<double>(a) / d);
        return cplx(v / d, 0.0);
    }
    KahanSum<cplx> acc;
    for (std::int64_t a = 1; a < d; ++a) {
        int c = chi(a);
        if (c != 0) acc.add(static_cast<double>(c) * hurwitz_zeta(s, static_cast<double>(a) / d));
    }
    return acc.value() * std::exp(-s * std::log(static_cast<double>(d)));
}

// ---------------------------------------------------------------------------
// Exponential integral.

/// Ei(x) = gamma + log|x| + sum_{n>=1} x^n/(n n!)  (|x| <= 40),
/// asymptotic e^x/x sum k!/x^k beyond.
inline double expint_Ei(double x) {
    if (x == 0.0) throw std::domain_error("expint_Ei: x = 0");
    if (std::abs(x) <= 40.0) {
        long double sum = 0.0L, term = 1.0L;
        for (int n = 1; n <= 300; ++n) {
            term *= x / n;
            long double add = term / n;
            sum += add;
            if (std::abs((double)add) < 1e-18 * (std::abs((double)sum) + 1.0) && n > 4) break;
        }
        return kEulerGamma + std::log(std::abs(x)) + static_cast<double>(sum);
    }
    // asymptotic: Ei(x) ~ e^x/x (1 + 1!/x + 2!/x^2 + ...), truncated at smallest term
    long double sum = 1.0L, term = 1.0L;
    for (int k = 1; k <= 60; ++k) {
        long double next = term * k / x;
        if (std::abs(next) >= std::abs(term)) break;
        term = next;
        sum += term;
    }
    return std::exp(x) / x * static_cast<double>(sum);
}

// ---------------------------------------------------------------------------
// Bessel J of non-negative integer order, real argument.

namespace detail {

inline double bessel_J01_series(int nu, double x) {
    // |x| <= 16
    const long double q = -0.25L * (long double)x * (long double)x;
    long double term = (nu == 0) ? 1.0L : 0.5L * x;
    long double sum = term;
    for (int k = 1; k <= 60; ++k) {
        term *= q / ((long double)k * (k + nu));
        sum += term;
        if (std::abs((double)term) < 1e-19 * std::abs((double)sum) + 1e-300) break;
    }
    return static_cast<double>(sum);
}

inline double bessel_J01_asymptotic(int nu, double x) {
    // Hankel expansion, x >= 16
    const double mu = 4.0 * nu * nu;
    long double P = 1.0L, Q = 0.0L, term = 1.0L;
    const long double x8 = 8.0L * x;
    for (int k = 1; k <= 30; ++k) {
        long double f = (mu - (2.0L * k - 1.0L) * (2.0L * k - 1.0L)) / (k * x8);
        long double next = term * f;
        if (std::abs((double)next) >= std::abs((double)term) && k > 2) break;
        term = next;
        if (k % 2 == 1)
            Q += (k % 4 == 1) ? term : -term;
        else
            P += (k % 4 == 2) ? -term : term;
    }
    const double omega = x - 0.5 * nu * kPi - 0.25 * kPi;
    return std::sqrt(2.0 / (kPi * x)) *
           (static_cast<double>(P) * std::cos(omega) - static_cast<double>(Q) * std::sin(omega));
}

}  // namespace detail

/// J_nu(x) for integer nu >= 0, x > 0.
inline double bessel_J(int nu, double x) {
    if (nu < 0) throw std::invalid_argument("bessel_J: order must be non-negative");
    if (!(x > 0.0)) throw std::domain_error("bessel_J: requires x > 0");
    auto j01 = [](int n, double xx) {
        return xx <= 16.0 ? detail::bessel_J01_series(n, xx) : detail::bessel_J01_asymptotic(n, xx);
    };
    if (nu == 0) return j01(0, x);
    if (nu == 1) return j01(1, x);
    if (x >= static_cast<double>(nu)) {
        // upward recurrence, stable for nu < x
        double jm = j01(0, x), j = j01(1, x);
        for (int k = 1; k < nu; ++k) {
            double jp = (2.0 * k / x) * j - jm;
            jm = j;
            j = jp;
        }
        return j;
    }
    // Miller downward recurrence with even-sum normalization
    int M = nu + 16 + static_cast<int>(std::ceil(std::sqrt(40.0 * nu)));
    if (M % 2 == 1) ++M;
    long double jp = 0.0L, j = 1e-250L, norm = 0.0L, result = 0.0L;
    for (int k = M; k >= 1; --k) {
        long double jm = (2.0L * k / x) * j - jp;  // jm = J_{k-1}
        jp = j;
        j = jm;
        if (k - 1 == nu) result = jm;
        if ((k - 1) % 2 == 0) norm += (k - 1 == 0) ? jm : 2.0L * jm;
        if (std::abs((double)j) > 1e240) {  // rescale
            j *= 1e-240L;
            jp *= 1e-240L;
            norm *= 1e-240L;
            result *= 1e-240L;
        }
    }
    return static_cast<double>(result / norm);
}

// ---------------------------------------------------------------------------
// Oscillatory Mehler-Sonine kernels
//   osc_kernel(phase, trig, w, t) = int_0^inf trig(w*phi(u)) cos(2 t u) du
// with phi = cosh or sinh.  [0,U] by speed-matched Gauss panels, tail by a
// three-term integration-by-parts expansion at U.

enum class OscPhase { Cosh, Sinh };
enum class OscTrig { Cos, Sin };

inline double osc_kernel(OscPhase phase, OscTrig trig, double w, double t,
                         const EvalPrecision& prec = {}) {
    if (!(w > 0.0)) throw std::domain_error("osc_kernel: requires w > 0");
    t = std::abs(t);
    const bool sinh_phase = (phase == OscPhase::Sinh);
    auto phi = [&](double u) { return sinh_phase ? std::sinh(u) : std::cosh(u); };
    auto dphi = [&](double u) { return sinh_phase ? std::cosh(u) : std::sinh(u); };

    const double lambda = std::max({2.0e4, 40.0 * (t + 1.0),
                                    std::cbrt(24.0 / (prec.rel_tol * 1e-2))});
    const double target = (lambda + 2.0 * t) / w;
    const double U = sinh_phase ? std::acosh(std::max(1.0 + 1e-12, target)) : std::asinh(target);

    auto integrand = [&](double u) {
        double p = w * phi(u);
        double tr = (trig == OscTrig::Cos) ? std::cos(p) : std::sin(p);
        return tr * std::cos(2.0 * t * u);
    };

    KahanSum<double> acc;
    double u = 0.0;
    long long evals = 0;
    auto speed = [&](double uu) { return w * dphi(uu) + 2.0 * t + 1.0; };
    while (u < U) {
        // half-cycle panels, sized against the speed at the panel end
        double du = std::min({kPi / speed(u), 0.25, U - u});
        while (speed(u + du) * du > kPi) du *= 0.7;
        auto r = quad::gk15([&](double uu) { return cplx(integrand(uu), 0.0); }, u, u + du);
        acc.add(r.integral.real());
        u += du;
        evals += 15;
        if (evals > 64LL * prec.max_nodes)
            throw quadrature_error("osc_kernel: node budget exhausted");
    }

    // tail: int_U^inf e^{i psi} du ~ e^{i psi(U)} (iG - G' - i G'') with
    // G = 1/psi', G' = -psi''/psi'^3, G'' = -psi'''/psi'^4 + 3 psi''^2/psi'^5,
    // for each branch psi_pm = w phi(u) +- 2 t u.
    auto tail_branch = [&](double sgn) {
        double p1 = w * dphi(U) + sgn * 2.0 * t;  // psi'
        double p2 = w * phi(U);                   // psi'' = w*phi (phi''=phi)
        double p3 = w * dphi(U);                  // psi'''
        double psi = w * phi(U) + sgn * 2.0 * t * U;
        double G = 1.0 / p1;
        double Gp = -p2 / (p1 * p1 * p1);
        double Gpp = -p3 / (p1 * p1 * p1 * p1) + 3.0 * p2 * p2 / std::pow(p1, 5);
        cplx e = std::exp(cplx(0.0, psi));
        cplx val = e * cplx(-Gp, G - Gpp);
        return val;  // int_U^inf e^{i psi} du
    };
    cplx tp = tail_branch(+1.0), tm = tail_branch(-1.0);
    // trig(w phi) cos(2tu) = 1/2 [trig(psi_+) + trig(psi_-)]
    double tail = (trig == OscTrig::Cos) ? 0.5 * (tp.real() + tm.real())
                                         : 0.5 * (tp.imag() + tm.imag());
    return acc.value() + tail;
}

// ---------------------------------------------------------------------------
// Bessel functions of imaginary order 2it.

/// J_{2it}(2 pi x) via the Mehler-Sonine integrals:
///   Re J_{2it}(w) = (2 cosh(pi t)/pi) int_0^inf sin(w cosh u) cos(2tu) du
///   Im J_{2it}(w) = -(2 sinh(pi t)/pi) int_0^inf cos(w cosh u) cos(2tu) du
inline cplx bessel_J_imag(double t, double x, const EvalPrecision& prec = {}) {
    if (!(x > 0.0)) throw std::domain_error("bessel_J_imag: requires x > 0");
    if (std::abs(t) > 220.0) throw std::domain_error("bessel_J_imag: |t| too large");
    const double w = kTwoPi * x;
    double re = (2.0 * std::cosh(kPi * t) / kPi) * osc_kernel(OscPhase::Cosh, OscTrig::Sin, w, t, prec);
    double im = (t == 0.0) ? 0.0
                           : -(2.0 * std::sinh(kPi * t) / kPi) *
                                 osc_kernel(OscPhase::Cosh, OscTrig::Cos, w, t, prec);
    return cplx(re, im);
}

/// Power-series route for J_{2it}(2 pi x); independent cross-check of the
/// integral representation.  Valid for 2 pi x <= 34.
inline cplx bessel_J_imag_series(double t, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_J_imag_series: requires x > 0");
    const double w = kTwoPi * x;
    if (w > 34.0) throw std::domain_error("bessel_J_imag_series: argument too large for series");
    const cplx nu(0.0, 2.0 * t);
    cplx log_t0 = nu * std::log(0.5 * w) - log_gamma(1.0 + nu);
    std::complex<long double> term(std::exp(log_t0));
    std::complex<long double> sum = term;
    const long double q = -0.25L * (long double)w * (long double)w;
    for (int k = 1; k <= 400; ++k) {
        std::complex<long double> den((long double)k * k, (long double)k * 2.0L * t);
        term *= q / den;
        sum += term;
        if (std::abs(term) < 1e-22L * std::abs(sum) + 1e-300L) break;
    }
    return cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
}

/// K_{2it}(2 pi x), real for real t:
///   cosh(pi t) K_{2it}(w) = int_0^inf cos(w sinh u) cos(2tu) du
inline double bessel_K_imag(double t, double x, const EvalPrecision& prec = {}) {
    if (!(x > 0.0)) throw std::domain_error("bessel_K_imag: requires x > 0");
    if (std::abs(t) > 220.0) throw std::domain_error("bessel_K_imag: |t| too large");
    return osc_kernel(OscPhase::Sinh, OscTrig::Cos, kTwoPi * x, t, prec) / std::cosh(kPi * t);
}

/// Series route for K_{2it}(2 pi x):  K_0 series at t = 0, otherwise
///   K_{2it}(w) = -pi Im I_{2it}(w) / sinh(2 pi t).
inline double bessel_K_imag_series(double t, double x) {
    if (!(x > 0.0)) throw std::domain_error("bessel_K_imag_series: requires x > 0");
    const double w = kTwoPi * x;
    if (w > 34.0) throw std::domain_error("bessel_K_imag_series: argument too large for series");
    if (t == 0.0) {
        const long double q = 0.25L * (long double)w * (long double)w;
        long double i0 = 1.0L, term = 1.0L, ksum = 0.0L, h = 0.0L;
        for (int k = 1; k <= 200; ++k) {
            term *= q / ((long double)k * k);
            h += 1.0L / k;
            i0 += term;
            ksum += term * h;
            if (term < 1e-22L * i0) break;
        }
        return static_cast<double>(-(std::log(0.5 * w) + kEulerGamma) * (double)i0 + (double)ksum);
    }
    const cplx nu(0.0, 2.0 * t);
    cplx log_t0 = nu * std::log(0.5 * w) - log_gamma(1.0 + nu);
    std::complex<long double> term(std::exp(log_t0));
    std::complex<long double> sum = term;
    const long double q = 0.25L * (long double)w * (long double)w;
    for (int k = 1; k <= 400; ++k) {
        std::complex<long double> den((long double)k * k, (long double)k * 2.0L * t);
        term *= q / den;
        sum += term;
        if (std::abs(term) < 1e-22L * std::abs(sum) + 1e-300L) break;
    }
    return -kPi * static_cast<double>(sum.imag()) / std::sinh(kTwoPi * t);
}

}  // namespace specsum::specfun
