// Central-value machinery: Hecke-eigenvalue records (ingested or synthetic),
// smoothed approximate-functional-equation evaluators for the three central
// values and their critical-line analogues, the Rankin-Selberg series, and
// the combined L-product entering the diagonal evaluation.
#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "specsum/arith.hpp"
#include "specsum/common.hpp"
#include "specsum/specfun.hpp"
#include "specsum/weights.hpp"

namespace specsum::lfun {

/// Spectral data of one Hecke-Maass form: spectral parameter, parity, Hecke
/// eigenvalues lambda(1..N), and optionally the symmetric-square value.
struct MaassFormRecord {
    double t = 0.0;
    bool even = true;
    std::vector<double> hecke;  // lambda(n) at index n-1
    std::optional<double> sym_sq;
    int level = 1;
    std::string source;

    std::int64_t n_max() const { return static_cast<std::int64_t>(hecke.size()); }
    double lambda(std::int64_t n) const {
        if (n < 1 || n > n_max())
            throw insufficient_coefficients("MaassFormRecord: missing lambda(" +
                                            std::to_string(n) + ")");
        return hecke[static_cast<std::size_t>(n - 1)];
    }

    struct Violation {
        std::int64_t m, n;
        double discrepancy;
        std::string what;
    };

    /// Hecke relations to the stated tolerance, lambda(1) = 1, and the soft
    /// individual bound |lambda(n)| <= d(n) n^{7/64 + 0.01}.
    std::vector<Violation> validate(double tol = 1e-6) const {
        std::vector<Violation> out;
        if (hecke.empty() || std::abs(hecke[0] - 1.0) > tol)
            out.push_back({1, 1, hecke.empty() ? 1.0 : std::abs(hecke[0] - 1.0),
                           "lambda(1) != 1"});
        if (!(t > 0.0)) out.push_back({0, 0, 0.0, "spectral parameter must be positive"});
        if (sym_sq && !(*sym_sq > 0.0)) out.push_back({0, 0, 0.0, "sym_sq must be positive"});
        const std::int64_t N = n_max();
        for (std::int64_t m = 2; m * m <= N; ++m) {
            for (std::int64_t n = m; m * n <= N; ++n) {
                double lhs = lambda(m) * lambda(n);
                double rhs = 0.0;
                for (std::int64_t l : divisors(std::gcd(m, n))) rhs += lambda(m * n / (l * l));
                if (std::abs(lhs - rhs) > tol)
                    out.push_back({m, n, std::abs(lhs - rhs), "Hecke relation"});
            }
        }
        for (std::int64_t n = 1; n <= N; ++n) {
            double bound = divisor_count(n) * std::pow(n, 7.0 / 64.0 + 0.01) + tol;
            if (std::abs(lambda(n)) > bound)
                out.push_back({n, n, std::abs(lambda(n)) - bound, "eigenvalue bound"});
        }
        return out;
    }
};

/// Multiplicative coefficient table from per-prime data lambda(p^e) = U_e(c_p)
/// (Chebyshev recursion).  prime_value(p) must return lambda(p).
template <typename PrimeFn>
std::vector<double> multiplicative_table(std::int64_t n_max, PrimeFn&& prime_value) {
    std::vector<double> lam(static_cast<std::size_t>(n_max) + 1, 0.0);
    std::vector<std::int64_t> ppart(static_cast<std::size_t>(n_max) + 1, 0);
    SpfSieve sieve(static_cast<std::size_t>(n_max));
    lam[1] = 1.0;
    ppart[1] = 1;
    for (std::int64_t n = 2; n <= n_max; ++n) {
        std::int64_t p = sieve.spf(static_cast<std::size_t>(n));
        std::int64_t m = n / p;
        if (m % p != 0) {
            double lp = (m == 1) ? prime_value(p) : lam[static_cast<std::size_t>(p)];
            lam[static_cast<std::size_t>(n)] = lp * lam[static_cast<std::size_t>(m)];
            ppart[static_cast<std::size_t>(n)] = p;
        } else {
            std::int64_t pp = ppart[static_cast<std::size_t>(m)] * p;  // p^e
            ppart[static_cast<std::size_t>(n)] = pp;
            if (pp == n) {
                // prime power: lambda(p^e) = lambda(p) lambda(p^{e-1}) - lambda(p^{e-2})
                double lp = lam[static_cast<std::size_t>(p)];
                double l1 = lam[static_cast<std::size_t>(n / p)];
                double l2 = lam[static_cast<std::size_t>(n / (p * p))];
                lam[static_cast<std::size_t>(n)] = lp * l1 - l2;
            } else {
                lam[static_cast<std::size_t>(n)] =
                    lam[static_cast<std::size_t>(pp)] * lam[static_cast<std::size_t>(n / pp)];
            }
        }
    }
    lam.erase(lam.begin());
    return lam;
}

/// Deterministic synthetic record with uniform Satake angles; useful wherever
/// a structurally valid Hecke table is needed without real spectral data.
inline MaassFormRecord synthetic_record(std::uint64_t seed, std::int64_t n_max, double t,
                                        bool even = true) {
    MaassFormRecord r;
    r.t = t;
    r.even = even;
    r.source = "synthetic(seed=" + std::to_string(seed) + ")";
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> th(0.0, kPi);
    r.hecke = multiplicative_table(n_max, [&](std::int64_t) { return 2.0 * std::cos(th(rng)); });
    return r;
}

/// Eisenstein coefficient table lambda(n, t0) as a record; a genuine
/// automorphic surrogate for data-free end-to-end tests.
inline MaassFormRecord eisenstein_record(double t0, std::int64_t n_max) {
    MaassFormRecord r;
    r.t = t0;
    r.even = true;
    r.source = "eisenstein(t0=" + std::to_string(t0) + ")";
    r.hecke = multiplicative_table(
        n_max, [&](std::int64_t p) { return 2.0 * std::cos(t0 * std::log((double)p)); });
    return r;
}

/// Fast sieve of lambda(n, t) for all n <= n_max.
inline std::vector<double> eisen_lambda_sieve(std::int64_t n_max, double t) {
    return multiplicative_table(
        n_max, [&](std::int64_t p) { return 2.0 * std::cos(t * std::log((double)p)); });
}

struct CentralValueResult {
    double value = 0.0;
    double tail_bound = 0.0;
    std::int64_t terms_used = 0;
};

namespace detail {

// effective length: the V-weights decay like exp(-l^2/4) past argument 1, so
// cut where the envelope reaches eps
inline double log_cutoff(double eps) { return 2.0 * std::sqrt(std::log(1.0 / eps)); }

inline double tail_estimate(std::int64_t n_used, double eps) {
    return 8.0 * std::sqrt(static_cast<double>(n_used) + 1.0) *
           std::log(static_cast<double>(n_used) + 2.0) * eps;
}

}  // namespace detail

enum class EisenKind { Zeta2, Chi2, F2 };

/// Critical-line approximate functional equations (no cusp data):
///   Zeta2: |zeta(1/2+it)|^2 = sum_{+-} sum_n lambda(n,t) n^{-1/2} V1^{+-}(n,t)
///   Chi2:  |L(1/2+it,chi)|^2 = 2 sum_m lambda(m,t) chi(m) m^{-1/2} V2(m,t)
///   F2:    |L(1/2+it,f)|^2  = 2 sum_r lambda(r,t) lambda_f(r) r^{-1/2} V3(r,t)
inline CentralValueResult afe_eisenstein(EisenKind kind, double t,
                                         const MaassFormRecord* f,
                                         const arith::QuadraticCharacter* chi,
                                         const weights::WeightParams& params,
                                         const weights::ContourSpec& contour,
                                         double series_eps = 1e-8) {
    const double l0 = detail::log_cutoff(series_eps);
    const double el0 = std::exp(l0);
    CentralValueResult out;
    if (kind == EisenKind::Zeta2) {
        const double tb = std::pow(params.T, params.beta);
        std::int64_t n_hi =
            std::max<std::int64_t>(16, (std::int64_t)std::ceil(std::abs(t) / kTwoPi * el0 * tb));
        auto lam = eisen_lambda_sieve(n_hi, t);
        auto cw = weights::make_contour_weights(weights::VKind::V1, t, params, contour);
        double lo_arg = std::log(1.0 * std::min(1.0, 1.0 / tb)) - 0.1;
        double hi_arg = std::log((double)n_hi * tb) + 0.1;
        weights::VTable V(cw, lo_arg, hi_arg, 4096);
        KahanSum<double> acc;
        double lt = std::log(tb);
        for (std::int64_t n = 1; n <= n_hi; ++n) {
            double ln = std::log((double)n);
            double w = V(ln + lt) + V(ln - lt);
            acc.add(lam[static_cast<std::size_t>(n - 1)] / std::sqrt((double)n) * w);
        }
        out.value = acc.value();
        out.terms_used = n_hi;
        out.tail_bound = detail::tail_estimate(n_hi, series_eps);
        return out;
    }
    if (kind == EisenKind::Chi2) {
        if (!chi) throw std::invalid_argument("afe_eisenstein: Chi2 needs a character");
        const double d = static_cast<double>(chi->modulus());
        std::int64_t m_hi =
            std::max<std::int64_t>(16, (std::int64_t)std::ceil(std::abs(t) / kTwoPi * el0 * d));
        auto lam = eisen_lambda_sieve(m_hi, t);
        auto cw = weights::make_contour_weights(weights::VKind::V1, t, params, contour);
        weights::VTable V(cw, std::log(1.0 / d) - 0.1, std::log((double)m_hi / d) + 0.1, 4096);
        KahanSum<double> acc;
        for (std::int64_t m = 1; m <= m_hi; ++m) {
            int cv = (*chi)(m);
            if (cv == 0) continue;
            acc.add(2.0 * cv * lam[static_cast<std::size_t>(m - 1)] / std::sqrt((double)m) *
                    V(std::log((double)m / d)));
        }
        out.value = acc.value();
        out.terms_used = m_hi;
        out.tail_bound = detail::tail_estimate(m_hi, series_eps);
        return out;
    }
    // F2
    if (!f) throw std::invalid_argument("afe_eisenstein: F2 needs a coefficient record");
    const double cond = std::abs(params.T * params.T - t * t);
    if (cond < 1.0) throw std::domain_error("afe_eisenstein: conductor dropping at |t| = T");
    std::int64_t r_hi = std::max<std::int64_t>(
        16, (std::int64_t)std::ceil(cond / (4.0 * kPi * kPi) * el0));
    if (r_hi > f->n_max())
        throw insufficient_coefficients("afe_eisenstein: F2 needs coefficients up to " +
                                        std::to_string(r_hi));
    auto lam = eisen_lambda_sieve(r_hi, t);
    auto cw = weights::make_contour_weights(weights::VKind::V3, t, params, contour);
    weights::VTable V(cw, -l0 - 2.0 - std::log(cond), std::log((double)r_hi) + 0.1, 4096);
    const double l4p = std::log(4.0 * kPi * kPi / cond);
    KahanSum<double> acc;
    for (std::int64_t r = 1; r <= r_hi; ++r) {
        acc.add(2.0 * lam[static_cast<std::size_t>(r - 1)] * f->lambda(r) /
                std::sqrt((double)r) * V(std::log((double)r) + l4p));
    }
    out.value = acc.value();
    out.terms_used = r_hi;
    out.tail_bound = detail::tail_estimate(r_hi, series_eps);
    return out;
}

/// Uneven approximate functional equation for the first central value:
///   sum_{+-} sum_n lambda(+-n) n^{-1/2} V1^{+-}(n, t),
/// with lambda(-n) = +-lambda(n) by parity.  Valid in a window t ~ T.
inline CentralValueResult afe_L_uj(const MaassFormRecord& u, const weights::WeightParams& params,
                                   const weights::ContourSpec& contour, double series_eps = 1e-8) {
    const double ratio = std::abs(std::log(u.t / params.T)) / std::log(params.T);
    if (ratio > 0.5)
        throw std::domain_error("afe_L_uj: spectral parameter outside the T-window");
    const double l0 = detail::log_cutoff(series_eps);
    const double tb = std::pow(params.T, params.beta);
    std::int64_t n_hi = std::max<std::int64_t>(
        16, (std::int64_t)std::ceil(u.t / kTwoPi * std::exp(l0) * tb));
    if (n_hi > u.n_max())
        throw insufficient_coefficients("afe_L_uj: needs coefficients up to " +
                                        std::to_string(n_hi));
    auto cw = weights::make_contour_weights(weights::VKind::V1, u.t, params, contour);
    weights::VTable V(cw, std::log(1.0 / tb) - 0.1, std::log((double)n_hi * tb) + 0.1, 4096);
    const double lt = std::log(tb);
    const double parity = u.even ? 1.0 : -1.0;
    KahanSum<double> acc;
    for (std::int64_t n = 1; n <= n_hi; ++n) {
        double ln = std::log((double)n);
        acc.add(u.lambda(n) / std::sqrt((double)n) * (V(ln + lt) + parity * V(ln - lt)));
    }
    CentralValueResult out;
    out.value = acc.value();
    out.terms_used = n_hi;
    out.tail_bound = detail::tail_estimate(n_hi, series_eps);
    return out;
}

/// Even-parity central value of the character twist:
///   2 sum_m lambda(m) chi(m) m^{-1/2} V2(m, t)
inline CentralValueResult afe_L_chi(const MaassFormRecord& u, const arith::QuadraticCharacter& chi,
                                    const weights::WeightParams& params,
                                    const weights::ContourSpec& contour,
                                    double series_eps = 1e-8) {
    if (!u.even)
        throw std::invalid_argument("afe_L_chi: identity requires an even form (use the product trick)");
    const double l0 = detail::log_cutoff(series_eps);
    const double d = static_cast<double>(chi.modulus());
    std::int64_t m_hi =
        std::max<std::int64_t>(16, (std::int64_t)std::ceil(u.t / kTwoPi * std::exp(l0) * d));
    if (m_hi > u.n_max())
        throw insufficient_coefficients("afe_L_chi: needs coefficients up to " +
                                        std::to_string(m_hi));
    auto cw = weights::make_contour_weights(weights::VKind::V1, u.t, params, contour);
    weights::VTable V(cw, std::log(1.0 / d) - 0.1, std::log((double)m_hi / d) + 0.1, 4096);
    KahanSum<double> acc;
    for (std::int64_t m = 1; m <= m_hi; ++m) {
        int cv = chi(m);
        if (cv == 0) continue;
        acc.add(2.0 * cv * u.lambda(m) / std::sqrt((double)m) * V(std::log((double)m / d)));
    }
    CentralValueResult out;
    out.value = acc.value();
    out.terms_used = m_hi;
    out.tail_bound = detail::tail_estimate(m_hi, series_eps);
    return out;
}

/// Even-parity central value of the Rankin-Selberg product:
///   2 sum_r lambda_u(r) lambda_f(r) r^{-1/2} V3(r, t)
inline CentralValueResult afe_L_rankin(const MaassFormRecord& u, const MaassFormRecord& f,
                                       const weights::WeightParams& params,
                                       const weights::ContourSpec& contour,
                                       double series_eps = 1e-8) {
    if (!u.even)
        throw std::invalid_argument("afe_L_rankin: identity requires an even form");
    const double cond = std::abs(params.T * params.T - u.t * u.t);
    if (cond < 1.0) throw std::domain_error("afe_L_rankin: conductor dropping at |t| = T");
    const double l0 = detail::log_cutoff(series_eps);
    std::int64_t r_hi = std::max<std::int64_t>(
        16, (std::int64_t)std::ceil(cond / (4.0 * kPi * kPi) * std::exp(l0)));
    if (r_hi > u.n_max() || r_hi > f.n_max())
        throw insufficient_coefficients("afe_L_rankin: needs coefficients up to " +
                                        std::to_string(r_hi));
    auto cw = weights::make_contour_weights(weights::VKind::V3, u.t, params, contour);
    weights::VTable V(cw, -l0 - 2.0 - std::log(cond), std::log((double)r_hi) + 0.1, 4096);
    const double l4p = std::log(4.0 * kPi * kPi / cond);
    KahanSum<double> acc;
    for (std::int64_t r = 1; r <= r_hi; ++r) {
        acc.add(2.0 * u.lambda(r) * f.lambda(r) / std::sqrt((double)r) *
                V(std::log((double)r) + l4p));
    }
    CentralValueResult out;
    out.value = acc.value();
    out.terms_used = r_hi;
    out.tail_bound = detail::tail_estimate(r_hi, series_eps);
    return out;
}

struct DirichletTruncation {
    cplx value{};
    double tail_estimate = 0.0;
    bool divergent = false;
};

/// zeta(2s) sum_{n<=N} lambda_u(n) lambda_f(n) n^{-s}, raw truncation.
inline DirichletTruncation rankin_dirichlet(const MaassFormRecord& u, const MaassFormRecord& f,
                                            cplx s, std::int64_t N) {
    DirichletTruncation out;
    if (N > u.n_max() || N > f.n_max())
        throw insufficient_coefficients("rankin_dirichlet: table shorter than N");
    out.divergent = (s.real() <= 1.0);
    KahanSum<cplx> acc;
    for (std::int64_t n = 1; n <= N; ++n)
        acc.add(u.lambda(n) * f.lambda(n) * std::exp(-s * std::log((double)n)));
    out.value = specfun::zeta(2.0 * s) * acc.value();
    // divisor-type tail comparison for Re s > 1
    if (!out.divergent)
        out.tail_estimate = 8.0 * std::log((double)N + 2.0) *
                            std::pow((double)N, 1.0 - s.real()) / std::abs(s.real() - 1.0);
    return out;
}

namespace detail {

/// Smoothed edge-of-strip value L(w, a) = sum a_n n^{-w} e^{-(n/N)^2}; the
/// Mellin remainder past the pole of Gamma is O(N^{-1/2}) and reported.
template <typename CoefFn>
cplx smoothed_L(CoefFn&& a, std::int64_t n_available, cplx w, double N) {
    std::int64_t n_hi = std::min<std::int64_t>(
        n_available, static_cast<std::int64_t>(std::ceil(5.3 * N)));
    KahanSum<cplx> acc;
    for (std::int64_t n = 1; n <= n_hi; ++n) {
        double smooth = std::exp(-((double)n / N) * ((double)n / N));
        acc.add(a(n) * smooth * std::exp(-w * std::log((double)n)));
    }
    return acc.value();
}

}  // namespace detail

/// L(s) = L(1,chi) L(1+s,f) L(1+s,f x chi) / L(2+2s,chi); the f-factors by
/// smoothed truncation at length N (default 1e4, shrunk to the table).
inline cplx L_combo(cplx s, const MaassFormRecord& f, const arith::QuadraticCharacter& chi,
                    double N_smooth = 1e4) {
    const double N = std::min(N_smooth, static_cast<double>(f.n_max()) / 5.3);
    if (N < 64.0)
        throw insufficient_coefficients("L_combo: coefficient table too short for smoothing");
    auto plain = [&](std::int64_t n) { return f.lambda(n); };
    auto twisted = [&](std::int64_t n) { return f.lambda(n) * chi(n); };
    cplx l1chi = specfun::dirichlet_L(cplx(1.0, 0.0), chi);
    cplx lf = detail::smoothed_L(plain, f.n_max(), 1.0 + s, N);
    cplx lfchi = detail::smoothed_L(twisted, f.n_max(), 1.0 + s, N);
    cplx denom = specfun::dirichlet_L(2.0 + 2.0 * s, chi);
    return l1chi * lf * lfchi / denom;
}

/// L'(0) by five-point central differences with Richardson extrapolation.
inline double L_combo_deriv0(const MaassFormRecord& f, const arith::QuadraticCharacter& chi,
                             double N_smooth = 1e4) {
    auto d5 = [&](double h) {
        auto L = [&](double x) { return L_combo(cplx(x, 0.0), f, chi, N_smooth).real(); };
        return (-L(2 * h) + 8 * L(h) - 8 * L(-h) + L(-2 * h)) / (12 * h);
    };
    double h = 1e-3;
    double a = d5(h), b = d5(0.5 * h);
    return b + (b - a) / 15.0;  // one Richardson step on the h^4 error
}

}  // namespace specsum::lfun
