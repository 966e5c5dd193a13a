// Bessel-kernel transforms: the trace-formula kernels, spectral averages of
// J/K Bessel functions of imaginary order against localized test functions
// (both sides: direct double quadrature and stationary-phase main terms),
// the backwards-Kuznetsov transforms, and the Voronoi Gamma-ratio factors.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "specsum/arith.hpp"
#include "specsum/common.hpp"
#include "specsum/quadrature.hpp"
#include "specsum/specfun.hpp"

namespace specsum::transforms {

/// Smooth even plateau bump exp(-v^{2p}), v = (|y|-center)/sigma, clipped to
/// exact zero where the exponent exceeds 92 (value below 1e-40).  Carries
/// analytic derivatives of any order via the polynomial recursion
/// P_{n+1} = P_n' - 2p v^{2p-1} P_n.
struct HTestFunction {
    double center = 1.5;
    double sigma = 0.9;
    int p = 2;
    double amplitude = 1.0;
    double rise_y0 = 0.0;  // when > 0, multiply by 1 - exp(-(y/rise_y0)^4)
    double support_lo = 0.0;
    double support_hi = 0.0;
    double deriv_scale = 0.0;  // declared bound for ||h^(n)||^{1/n}

    static HTestFunction plateau(double center, double sigma, int p = 2, double rise_y0 = 0.0) {
        HTestFunction h;
        h.center = center;
        h.sigma = sigma;
        h.p = p;
        h.rise_y0 = rise_y0;
        double vclip = std::pow(92.0, 1.0 / (2.0 * p));
        h.support_lo = std::max(0.0, center - vclip * sigma);
        h.support_hi = center + vclip * sigma;
        h.deriv_scale = 2.0 * p / sigma;
        return h;
    }
    /// Bump whose support is exactly (lo, hi).
    static HTestFunction band(double lo, double hi, int p = 2) {
        double vclip = std::pow(92.0, 1.0 / (2.0 * p));
        return plateau(0.5 * (lo + hi), 0.5 * (hi - lo) / vclip, p);
    }
    /// Default weight: quartic-exponential plateau around y = 1.5 with a
    /// smooth zero at the origin (keeps the even extension C^5 there, so the
    /// cosine transform decays fast).
    static HTestFunction default_plateau() { return plateau(1.5, 1.0, 2, 0.25); }

    // derivatives of exp(-v^{2p}) via P_{n+1} = P_n' - 2p v^{2p-1} P_n
    static double exp_pow_deriv(double v, int p_, int n) {
        double e = std::pow(v * v, p_);
        if (e >= 92.0) return 0.0;
        if (n == 0) return std::exp(-e);
        const int q = 2 * p_;
        std::vector<double> P{1.0};
        for (int step = 0; step < n; ++step) {
            std::vector<double> next(P.size() + q - 1, 0.0);
            for (std::size_t i = 0; i < P.size(); ++i) {
                if (i >= 1) next[i - 1] += static_cast<double>(i) * P[i];
                next[i + q - 1] -= static_cast<double>(q) * P[i];
            }
            P = std::move(next);
        }
        double val = 0.0;
        for (std::size_t i = P.size(); i-- > 0;) val = val * v + P[i];
        return val * std::exp(-e);
    }

    double operator()(double y) const {
        double v = (std::abs(y) - center) / sigma;
        double base = amplitude * exp_pow_deriv(v, p, 0);
        if (rise_y0 > 0.0) base *= 1.0 - exp_pow_deriv(std::abs(y) / rise_y0, 2, 0);
        return base;
    }

    /// n-th derivative with respect to y, for y > 0 (analytic; Leibniz over
    /// the rise factor where it is active).
    double deriv(double y, int n) const {
        auto f1 = [&](int k) {
            return amplitude * exp_pow_deriv((std::abs(y) - center) / sigma, p, k) /
                   std::pow(sigma, k);
        };
        if (rise_y0 <= 0.0 || std::abs(y) / rise_y0 > std::pow(92.0, 0.25)) return f1(n);
        auto f2 = [&](int k) {  // d^k/dy^k [1 - exp(-(y/y0)^4)]
            double base = exp_pow_deriv(std::abs(y) / rise_y0, 2, k) / std::pow(rise_y0, k);
            return (k == 0) ? 1.0 - base : -base;
        };
        double sum = 0.0, binom = 1.0;
        for (int k = 0; k <= n; ++k) {
            sum += binom * f1(k) * f2(n - k);
            binom = binom * (n - k) / (k + 1.0);
        }
        return sum;
    }
};

/// Cosine transform G(u) = int tanh(pi t) h(t/T) t cos(2 pi u t) dt of the
/// localized weight, tabulated on a spline over xi = u T.  The integrand is
/// smooth and compactly supported, so a fine trapezoid sample is
/// exponentially accurate; images alias far outside the needed band.
class InnerCosTransform {
public:
    InnerCosTransform(const HTestFunction& h, double T, int n_samples = 4096,
                      double dxi = 0.0, double xi_cap = 240.0)
        : T_(T) {
        const double tlo = std::max(0.0, h.support_lo) * T;
        const double thi = h.support_hi * T;
        t_hi_ = thi;
        // resolve the cos(2 pi u t) oscillation: >= 64 spline points per
        // period at the top frequency of the support
        if (dxi <= 0.0) dxi = std::min(0.01, 1.0 / (64.0 * h.support_hi));
        const double dt = (thi - tlo) / n_samples;
        ts_.resize(n_samples + 1);
        gs_.resize(n_samples + 1);
        for (int i = 0; i <= n_samples; ++i) {
            double t = tlo + i * dt;
            ts_[i] = t;
            gs_[i] = std::tanh(kPi * t) * h(t / T) * t * dt;
            if (i == 0 || i == n_samples) gs_[i] *= 0.5;
        }
        const int xi_steps = static_cast<int>(xi_cap / dxi);
        // accumulate the whole u-grid at once with a Chebyshev cosine
        // recurrence per sample point
        std::vector<double> vals(static_cast<std::size_t>(xi_steps) + 1, 0.0);
        for (int i = 0; i <= n_samples; ++i) {
            double t = tlo + i * dt;
            double g = std::tanh(kPi * t) * h(t / T) * t * dt;
            if (i == 0 || i == n_samples) g *= 0.5;
            if (g == 0.0) continue;
            const double theta = kTwoPi * (dxi / T) * t;
            const double two_cos = 2.0 * std::cos(theta);
            double cm = std::cos(theta), cmm = 1.0;  // cos(k-1), cos(k-2) seeds
            vals[0] += g;
            if (xi_steps >= 1) vals[1] += g * cm;
            for (int k = 2; k <= xi_steps; ++k) {
                double ck = two_cos * cm - cmm;
                cmm = cm;
                cm = ck;
                vals[static_cast<std::size_t>(k)] += g * ck;
            }
        }
        double g0 = std::abs(vals[0]);
        double peak = g0;
        int quiet = 0;
        const int quiet_window = static_cast<int>(2.0 / dxi);  // a xi-length, not a count
        std::size_t keep = vals.size();
        for (std::size_t k = 0; k < vals.size(); ++k) {
            peak = std::max(peak, std::abs(vals[k]));
            quiet = (std::abs(vals[k]) < 1e-13 * peak) ? quiet + 1 : 0;
            if (quiet > quiet_window && k > static_cast<std::size_t>(quiet_window)) {
                keep = k + 1;
                break;
            }
        }
        vals.resize(keep);
        u_max_ = (static_cast<double>(vals.size()) - 1.0) * dxi / T;
        // G is even in u: mirror-pad so the natural-spline boundary condition
        // sits far from u = 0 (G''(0) is large and a natural end would bias
        // the first intervals)
        const int pad = 512;
        std::vector<double> padded(vals.size() + pad);
        for (int i = 0; i < pad; ++i) padded[static_cast<std::size_t>(i)] = vals[static_cast<std::size_t>(pad - i)];
        std::copy(vals.begin(), vals.end(), padded.begin() + pad);
        spline_ = CubicSpline(-pad * dxi / T, dxi / T, std::move(padded));
        g0_ = g0;
    }

    double operator()(double u) const { return u > u_max_ ? 0.0 : spline_(u); }

    /// crude local envelope: max |G| over half an oscillation period
    double envelope(double u) const {
        double p = 0.5 / t_hi_;
        return std::max({std::abs((*this)(u)), std::abs((*this)(u + p / 3.0)),
                         std::abs((*this)(u + 2.0 * p / 3.0))});
    }

    /// Exact trapezoid cosine transform (no interpolation error); used on the
    /// accuracy-critical Bessel-average paths.
    double eval_exact(double u) const {
        if (u > u_max_) return 0.0;
        double acc = 0.0;
        const double w = kTwoPi * u;
        for (std::size_t i = 0; i < ts_.size(); ++i) acc += gs_[i] * std::cos(w * ts_[i]);
        return acc;
    }

    double u_max() const { return u_max_; }
    double scale() const { return g0_; }
    double T() const { return T_; }

private:
    double T_;
    double u_max_ = 0.0;
    double g0_ = 0.0;
    double t_hi_ = 1.0;
    CubicSpline spline_;
    std::vector<double> ts_, gs_;
};

namespace detail {

/// int_0^{u_max} cos(2 pi X phi(pi u)) G(u) du with phi = cosh or sinh,
/// speed-adapted half-cycle panels.
inline double carrier_integral(bool sinh_phase, double X, const InnerCosTransform& G,
                               const EvalPrecision& prec, double u_cut = -1.0,
                               bool exact = false) {
    const double umax = (u_cut > 0.0) ? std::min(u_cut, G.u_max()) : G.u_max();
    auto f = [&](double u) {
        double ph = sinh_phase ? std::sinh(kPi * u) : std::cosh(kPi * u);
        return std::cos(kTwoPi * X * ph) * (exact ? G.eval_exact(u) : G(u));
    };
    auto speed = [&](double u) {
        double dph = sinh_phase ? std::cosh(kPi * u) : std::sinh(kPi * u);
        return kTwoPi * X * kPi * dph + kTwoPi * 2.5 * G.T() + 1.0;
    };
    KahanSum<double> acc;
    double u = 0.0;
    long long panels = 0;
    while (u < umax) {
        // the remaining tail is bounded by |G| over the local phase speed;
        // once negligible, integration by parts kills it
        if (G.envelope(u) < 1e-14 * (1.0 + G.scale()) * std::max(1.0, speed(u))) break;
        double du = std::min(kPi / speed(u), umax - u);
        while (speed(u + du) * du > kPi) du *= 0.7;
        auto r = quad::gk15([&](double uu) { return cplx(f(uu), 0.0); }, u, u + du);
        acc.add(r.integral.real());
        u += du;
        if (++panels > 4LL * prec.max_nodes)
            throw quadrature_error("carrier_integral: panel budget exhausted");
    }
    return acc.value();
}

}  // namespace detail

/// Trace-formula kernels, both real and even in t:
///   sign > 0: (4/pi) int_0^inf cos(4 pi x cosh u) cos(2 t u) du
///             (the i (J_{2it} - J_{-2it})/sinh(pi t) combination)
///   sign < 0: (4/pi) cosh(pi t) K_{2it}(4 pi x)
inline double kernel_J(int sign, double x, double t, const EvalPrecision& prec = {}) {
    if (!(x > 0.0)) throw std::domain_error("kernel_J: requires x > 0");
    auto phase = (sign >= 0) ? specfun::OscPhase::Cosh : specfun::OscPhase::Sinh;
    return 4.0 / kPi * specfun::osc_kernel(phase, specfun::OscTrig::Cos, 4.0 * kPi * x, t, prec);
}

/// h-averaged kernel: int_R J^{+-}(x,t) h(|t|) tanh(pi t) t dt / (2 pi),
/// computed with the inner t-transform first (stable for all x).  The inner
/// transform must have been built with T = 1 (unscaled h).
inline double kernel_h_average(int sign, double x, const InnerCosTransform& inner,
                               const EvalPrecision& prec = {}) {
    if (!(x > 0.0)) throw std::domain_error("kernel_h_average: requires x > 0");
    return 4.0 / kPi * detail::carrier_integral(sign < 0, 2.0 * x, inner, prec);
}

/// Both sides of a Bessel-average evaluation.
struct BesselAvgResult {
    cplx lhs_quadrature{};
    cplx main_term{};
    cplx correction{};
    double error_bound = 0.0;
};

/// Average of J_{2it}(2 pi x)/cosh(pi t) against h(t/T) t dt.  The direct
/// route integrates the inner transform against the cosh-phase carrier with
/// envelope-based truncation; the main term is the Fresnel evaluation
///   -(i sqrt2/pi) (T^2/sqrt x) Re((1+i) e(x) int_0^inf t h(t) e(-t^2 T^2/(2 pi^2 x)) dt).
inline BesselAvgResult bessel_avg_J(double x, const HTestFunction& h, double T, double alpha,
                                    const EvalPrecision& prec = {}) {
    if (!(x > 0.0)) throw std::domain_error("bessel_avg_J: requires x > 0");
    BesselAvgResult out;
    InnerCosTransform G(h, T);
    out.lhs_quadrature = cplx(0.0, -4.0 * detail::carrier_integral(false, x, G, prec));
    const double c = T * T / (2.0 * kPi * kPi * x);
    auto fres = quad::integrate(
        [&](double tau) {
            return tau * h(tau) * std::exp(cplx(0.0, -kTwoPi * c * tau * tau));
        },
        h.support_lo, h.support_hi, prec);
    cplx ex = std::exp(cplx(0.0, kTwoPi * (x - std::floor(x))));
    cplx inner = (cplx(1.0, 1.0) * ex * fres.value);
    out.main_term = cplx(0.0, -std::sqrt(2.0) / kPi) * (T * T / std::sqrt(x)) * inner.real();
    out.correction = 0.0;
    out.error_bound = x / std::pow(T, 3.0 - 12.0 * alpha);
    return out;
}

/// As above with an explicit u-truncation (used to measure the effect of the
/// proof's own cutoff against the envelope-based one).
inline cplx bessel_avg_J_lhs_truncated(double x, const HTestFunction& h, double T, double u_cut,
                                       const EvalPrecision& prec = {}) {
    InnerCosTransform G(h, T);
    return cplx(0.0, -4.0 * detail::carrier_integral(false, x, G, prec, u_cut));
}

/// Average of sinh(pi t) K_{2it}(2 pi x) against h(t/T) t dt.  Main term
/// (pi T/2) H(pi x/T) with H(y) = y h(y); the second main term is
/// -(pi^2 x /(48 T^2)) H'''(pi x/T), the coefficient re-derived from the
/// u^3 Taylor term and confirmed by quadrature fits.
inline BesselAvgResult bessel_avg_K(double x, const HTestFunction& h, double T, double alpha,
                                    const EvalPrecision& prec = {}) {
    if (!(x > 0.0)) throw std::domain_error("bessel_avg_K: requires x > 0");
    BesselAvgResult out;
    InnerCosTransform G(h, T);
    out.lhs_quadrature = 2.0 * kPi * detail::carrier_integral(true, x, G, prec, -1.0, true);
    const double z = kPi * x / T;
    auto H = [&](double y) { return y * h(y); };
    out.main_term = kPi * T / 2.0 * H(z);
    const double H3 = z * h.deriv(z, 3) + 3.0 * h.deriv(z, 2);
    out.correction = -(kPi * kPi * x / (48.0 * T * T)) * H3;
    out.error_bound = x / std::pow(T, 4.0 - 14.0 * alpha);
    return out;
}

/// Slow but independent route for the K-average left side: pointwise
/// tanh(pi t) (cosh(pi t) K_{2it}) kernels integrated over t directly.
inline double bessel_avg_K_lhs_pointwise(double x, const HTestFunction& h, double T,
                                         const EvalPrecision& prec = {}) {
    auto f = [&](double t) {
        return std::tanh(kPi * t) *
               specfun::osc_kernel(specfun::OscPhase::Sinh, specfun::OscTrig::Cos, kTwoPi * x, t,
                                   prec) *
               h(t / T) * t;
    };
    auto r = quad::integrate_real(f, std::max(0.0, h.support_lo) * T, h.support_hi * T,
                                  EvalPrecision(1e-9, prec.max_nodes));
    return 2.0 * r.value.real();
}

// ---------------------------------------------------------------------------
// Backwards-Kuznetsov transforms of a compactly supported function.

struct CompactBump {
    std::function<double(double)> f;
    double lo = 0.0, hi = 0.0;
    double operator()(double x) const { return (x <= lo || x >= hi) ? 0.0 : f(x); }
};

inline CompactBump bump_from(const HTestFunction& h) {
    return CompactBump{[h](double x) { return h(x); }, h.support_lo, h.support_hi};
}

/// Bump supported on (lo, hi) built in log x, so both edges carry the same
/// logarithmic width (the natural variable for multiplicative transforms).
inline CompactBump log_band(double lo, double hi, int p = 3) {
    double vclip = std::pow(92.0, 1.0 / (2.0 * p));
    double xi0 = 0.5 * (std::log(lo) + std::log(hi));
    double sig = 0.5 * (std::log(hi) - std::log(lo)) / vclip;
    auto f = [xi0, sig, p](double x) {
        double v = (std::log(x) - xi0) / sig;
        double e = std::pow(v * v, p);
        return e >= 92.0 ? 0.0 : std::exp(-e);
    };
    return CompactBump{f, lo, hi};
}

/// i^k int_0^inf J_{k-1}(x) Phi(x) dx/x
inline cplx kuz_back_dot(const CompactBump& Phi, int k, const EvalPrecision& prec = {}) {
    if (k < 1) throw std::invalid_argument("kuz_back_dot: k must be >= 1");
    auto r = quad::integrate_real(
        [&](double x) { return specfun::bessel_J(k - 1, x) * Phi(x) / x; }, Phi.lo, Phi.hi, prec,
        1e-13);
    cplx ik = std::exp(cplx(0.0, kPi / 2.0 * k));
    return ik * r.value.real();
}

/// (i / 2 sinh(pi t)) int (J_{2it} - J_{-2it})(x) Phi(x) dx/x
///   = (2/pi) int_0^inf [int_0^inf cos(x cosh u) cos(2tu) du] Phi(x) dx/x
namespace detail {
// pre-split an oscillatory dx/x integral on a log grid resolving the phase
// x^{2it}
inline std::vector<double> log_breaks(double lo, double hi, double t) {
    int n = std::max(16, static_cast<int>(4.0 * (std::abs(t) / kPi + 1.0) * std::log(hi / lo)));
    std::vector<double> b;
    for (int j = 1; j < n; ++j) b.push_back(lo * std::pow(hi / lo, static_cast<double>(j) / n));
    return b;
}
}  // namespace detail

inline double kuz_back_tilde(const CompactBump& Phi, double t, const EvalPrecision& prec = {}) {
    auto r = quad::integrate_real(
        [&](double x) {
            return specfun::osc_kernel(specfun::OscPhase::Cosh, specfun::OscTrig::Cos, x, t, prec) *
                   Phi(x) / x;
        },
        Phi.lo, Phi.hi, EvalPrecision(1e-9, prec.max_nodes), 1e-13,
        detail::log_breaks(Phi.lo, Phi.hi, t));
    return 2.0 / kPi * r.value.real();
}

/// (2 cosh(pi t)/pi) int K_{2it}(x) Phi(x) dx/x
inline double kuz_back_check(const CompactBump& Phi, double t, const EvalPrecision& prec = {}) {
    auto r = quad::integrate_real(
        [&](double x) {
            return specfun::osc_kernel(specfun::OscPhase::Sinh, specfun::OscTrig::Cos, x, t, prec) *
                   Phi(x) / x;
        },
        Phi.lo, Phi.hi, EvalPrecision(1e-9, prec.max_nodes), 1e-13,
        detail::log_breaks(Phi.lo, Phi.hi, t));
    return 2.0 / kPi * r.value.real();
}

// ---------------------------------------------------------------------------
// Voronoi G-factors and the summation-formula check.

/// G_{+-}(s) defined by
///   G_{+-}(s) 4 pi^2 i = Gamma((1+s+iT)/2)Gamma((1+s-iT)/2) / (Gamma((-s+iT)/2)Gamma((-s-iT)/2))
///                      +- Gamma((2+s+iT)/2)Gamma((2+s-iT)/2) / (Gamma((1-s+iT)/2)Gamma((1-s-iT)/2))
inline cplx voronoi_G(cplx s, int sign, double T) {
    const cplx iT(0.0, T);
    auto lg = [](cplx z) { return specfun::log_gamma(z); };
    cplx r1 = std::exp(lg((1.0 + s + iT) / 2.0) + lg((1.0 + s - iT) / 2.0) -
                       lg((-s + iT) / 2.0) - lg((-s - iT) / 2.0));
    cplx r2 = std::exp(lg((2.0 + s + iT) / 2.0) + lg((2.0 + s - iT) / 2.0) -
                       lg((1.0 - s + iT) / 2.0) - lg((1.0 - s - iT) / 2.0));
    cplx num = (sign >= 0) ? r1 + r2 : r1 - r2;
    return num / (4.0 * kPi * kPi * cplx(0.0, 1.0));
}

/// Mellin transform phi~(z) = int phi(x) x^{z-1} dx of a (1,2)-type bump.
inline cplx mellin_bump(const CompactBump& phi, cplx z, const EvalPrecision& prec = {}) {
    auto r = quad::integrate([&](double x) { return phi(x) * std::exp((z - 1.0) * std::log(x)); },
                             phi.lo, phi.hi, prec, 1e-300);
    return r.value;
}

struct VoronoiCheck {
    cplx lhs{};
    cplx rhs{};
    double tail_bound = 0.0;
    double residual() const { return std::abs(lhs - rhs); }
};

/// Two sides of the Voronoi summation formula
///   sum_r lambda(r) e(r abar/c) phi(r/R)
///     = c sum_{+-} sum_q (lambda(q)/q) e(+-q a/c) int_{(sigma)} phi~(-s)
///         (pi^2 R q / c^2)^{-s} G_{+-}(s) ds   (plain ds; the integral is
///         real by the conjugate antisymmetry of G),
/// for a coefficient table of a form with spectral parameter T.  Data-quality
/// limited; the reported tail bound covers the q-truncation.
inline VoronoiCheck voronoi_identity_check(const std::vector<double>& lambda, double T,
                                           std::int64_t a, std::int64_t c, double R,
                                           const CompactBump& phi,
                                           [[maybe_unused]] const EvalPrecision& prec = {}) {
    if (c < 1) throw std::invalid_argument("voronoi_identity_check: c must be >= 1");
    if (std::gcd(mod_floor(a, c), c) != 1 && c > 1)
        throw std::invalid_argument("voronoi_identity_check: need (a,c) = 1");
    VoronoiCheck out;
    const std::int64_t r_hi = static_cast<std::int64_t>(std::floor(R * phi.hi));
    if (static_cast<std::size_t>(r_hi) > lambda.size())
        throw insufficient_coefficients("voronoi_identity_check: need coefficients up to " +
                                        std::to_string(r_hi));
    std::int64_t abar = (c == 1) ? 0 : mod_inverse(a, c);
    KahanSum<cplx> lhs;
    for (std::int64_t r = std::max<std::int64_t>(1, (std::int64_t)std::ceil(R * phi.lo));
         r <= r_hi; ++r) {
        double w = phi(r / R);
        if (w != 0.0)
            lhs.add(lambda[static_cast<std::size_t>(r - 1)] * w * arith::unit_phase(r * abar, c));
    }
    out.lhs = lhs.value();

    // Vertical line at sigma = 1.5.  |G(s)| grows like |Im s|^{2 sigma + 1}
    // along the line, so the integral only converges once the Mellin
    // transform's superpolynomial decay takes over; the height is extended
    // until the product is far below its peak.
    const double sigma = 1.5;
    const double dy = 0.04;
    // fast Mellin of the bump: fixed trapezoid in log x
    const int nm = 1024;
    const double llo = std::log(phi.lo), lhi = std::log(phi.hi);
    const double dl = (lhi - llo) / nm;
    std::vector<double> lx(nm + 1), px(nm + 1);
    for (int i = 0; i <= nm; ++i) {
        lx[i] = llo + i * dl;
        px[i] = phi(std::exp(lx[i])) * dl * ((i == 0 || i == nm) ? 0.5 : 1.0);
    }
    auto mellin_at = [&](cplx z) {  // int phi(x) x^{z-1} dx = int phi(e^l) e^{z l} dl
        KahanSum<cplx> acc;
        for (int i = 0; i <= nm; ++i) acc.add(px[i] * std::exp(z * lx[i]));
        return acc.value();
    };

    std::vector<cplx> wplus, wminus, snode;
    double peak = 0.0;
    int quiet = 0;
    for (int k = 0;; ++k) {
        double y = k * dy;
        cplx s(sigma, y);
        cplx m = mellin_at(-s);
        cplx gp = voronoi_G(s, +1, T), gm = voronoi_G(s, -1, T);
        snode.push_back(s);
        wplus.push_back(m * gp * (dy / kTwoPi));
        wminus.push_back(m * gm * (dy / kTwoPi));
        double mag = std::abs(m) * (std::abs(gp) + std::abs(gm));
        peak = std::max(peak, mag);
        quiet = (mag <= 1e-9 * peak) ? quiet + 1 : 0;
        if (quiet * dy > 20.0 && y > 6.0 * T) break;
        if (peak == 0.0 && y > 1.0) break;  // identically-zero bump
        if (y > 8000.0)
            throw quadrature_error("voronoi_identity_check: contour failed to decay");
    }
    wplus[0] *= 0.5;
    wminus[0] *= 0.5;
    const double base = kPi * kPi * R / (static_cast<double>(c) * c);
    double line_mass = 0.0;
    for (std::size_t k = 0; k < snode.size(); ++k)
        line_mass += 4.0 * kPi * (std::abs(wplus[k]) + std::abs(wminus[k]));
    // The integrand satisfies f(conj s) = -conj(f(s)) (the 4 pi^2 i
    // normalization of G), so the plain ds-integral over the full line equals
    // -4 pi Im(upper-half trapezoid sum) and is exactly real.
    KahanSum<cplx> rhs;
    const std::int64_t q_max = static_cast<std::int64_t>(lambda.size());
    const double tol_abs = std::max(1e-11, 1e-8 * (1.0 + std::abs(out.lhs)));
    double tail = 0.0;
    bool converged = false;
    for (std::int64_t q = 1; q <= q_max; ++q) {
        double lq = lambda[static_cast<std::size_t>(q - 1)];
        double bound = static_cast<double>(c) * std::abs(lq) / q *
                       std::pow(base * q, -sigma) * line_mass;
        if (q > 64 && bound < tol_abs) {
            tail = bound * q * 4.0 * std::log((double)q + 2.0) / (sigma - 1.0);
            converged = true;
            break;
        }
        double lbq = std::log(base * q);
        KahanSum<cplx> ip, im;
        for (std::size_t k = 0; k < snode.size(); ++k) {
            cplx e = std::exp(-snode[k] * lbq);
            ip.add(wplus[k] * e);
            im.add(wminus[k] * e);
        }
        double Iplus = -4.0 * kPi * ip.value().imag();
        double Iminus = -4.0 * kPi * im.value().imag();
        rhs.add(static_cast<double>(c) * lq / q *
                (arith::unit_phase(q * a, c) * Iplus + arith::unit_phase(-q * a, c) * Iminus));
    }
    if (!converged)
        throw insufficient_coefficients("voronoi_identity_check: q-sum not converged within table");
    out.rhs = rhs.value();
    out.tail_bound = tail;
    return out;
}

}  // namespace specsum::transforms
