// Smoothed-sum weight functions: the vertical-line integrals V1+-, V1, V2, V3
// built from Gamma_R ratios, their large-t Stirling approximants with
// correction polynomials, the localizing test functions W1, W2, Z, and the
// triple contour weight.
#pragma once

#include <cmath>
#include <complex>

#include "specsum/common.hpp"
#include "specsum/quadrature.hpp"
#include "specsum/specfun.hpp"

namespace specsum::weights {

/// Vertical-line integration parameters for all contour weights.
struct ContourSpec {
    double sigma = 1.0;
    double height = 6.0;
    int nodes = 512;

    ContourSpec() = default;
    ContourSpec(double s, double h, int n) : sigma(s), height(h), nodes(n) { validate(); }
    void validate() const {
        if (!(sigma > 0.0)) throw std::domain_error("ContourSpec: sigma must be positive");
        if (!(height >= 4.0)) throw std::invalid_argument("ContourSpec: height must be >= 4");
        if (nodes < 64) throw std::invalid_argument("ContourSpec: nodes must be >= 64");
    }
};

/// Spectral scale T, smoothing exponent alpha, shift exponent beta = 7 alpha,
/// and the even smoothing power of W2.
struct WeightParams {
    double T;
    double alpha;
    double beta;
    int w2_power;

    explicit WeightParams(double T_, double alpha_ = 0.01, int w2_power_ = 16)
        : T(T_), alpha(alpha_), beta(7.0 * alpha_), w2_power(w2_power_) {
        if (!(T > 0.0)) throw std::invalid_argument("WeightParams: T must be positive");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw std::invalid_argument("WeightParams: alpha must lie in (0,1)");
        if (w2_power < 4 || w2_power % 2 != 0)
            throw std::invalid_argument("WeightParams: w2_power must be even and >= 4");
    }
};

inline double W1(double t, const WeightParams& p) { return std::exp(-t * t / (p.T * p.T)); }

inline double W2(double t, const WeightParams& p) {
    double b1 = std::abs(t) / std::pow(p.T, 1.0 - 0.5 * p.alpha);
    double b2 = std::abs(p.T * p.T - t * t) / std::pow(p.T, 2.0 - 0.5 * p.alpha);
    double x1 = std::pow(b1, p.w2_power);
    double x2 = std::pow(b2, p.w2_power);
    return -std::expm1(-x1) * -std::expm1(-x2);
}

namespace detail {
// quintic smoothstep, C^2 at both ends
inline double smoothstep(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

inline double plateau(double y, double a, double b, double w) {
    if (b - a <= 2.0 * w || y <= a || y >= b) return 0.0;
    if (y < a + w) return smoothstep((y - a) / w);
    if (y > b - w) return smoothstep((b - y) / w);
    return 1.0;
}
}  // namespace detail

/// Smooth even window equal to 1 on the interior of the two admissible bands
/// (away from 0, 1 and the outer edge), with C^2 rolloffs.  Bands that are
/// empty at the given parameters are skipped.
inline double Z_window(double y, const WeightParams& p) {
    const double e = std::pow(p.T, -p.alpha);
    const double ay = std::abs(y);
    const double y_out = std::max(3.0, std::pow(p.T, p.alpha));
    const double w1 = std::min(e, 0.25 * ((1.0 - e) - e));
    const double w2 = std::min(e, 0.25 * (y_out - (1.0 + e)));
    double v = 0.0;
    if (w1 > 0.0) v += detail::plateau(ay, e, 1.0 - e, w1);
    if (w2 > 0.0) v += detail::plateau(ay, 1.0 + e, y_out, w2);
    return v;
}

enum class VKind { V1plus, V1minus, V1, V2, V3 };

namespace detail {

inline cplx v1_log_ratio(cplx s, double t, int kappa) {
    const cplx it(0.0, t);
    const double k = static_cast<double>(kappa);
    return specfun::log_gamma_R(0.5 + k + s + it) + specfun::log_gamma_R(0.5 + k + s - it) -
           specfun::log_gamma_R(0.5 + k + it) - specfun::log_gamma_R(0.5 + k - it);
}

inline cplx v3_log_ratio(cplx s, double t, double T) {
    const cplx itp(0.0, t + T), itm(0.0, t - T);
    return specfun::log_gamma_R(0.5 + s + itp) + specfun::log_gamma_R(0.5 + s - itp) -
           specfun::log_gamma_R(0.5 + itp) - specfun::log_gamma_R(0.5 - itp) +
           specfun::log_gamma_R(0.5 + s + itm) + specfun::log_gamma_R(0.5 + s - itm) -
           specfun::log_gamma_R(0.5 + itm) - specfun::log_gamma_R(0.5 - itm);
}

}  // namespace detail

/// Per-(kind,t) contour nodes and weights: V(arg) = sum_k w_k arg^{-s_k}.
/// Building the weights once amortizes the Gamma_R evaluations across the
/// whole coefficient sum.
struct ContourWeights {
    std::vector<cplx> s;
    std::vector<cplx> w;
    bool with_zeta = false;

    cplx eval_log(double log_arg) const {
        KahanSum<cplx> acc;
        for (std::size_t k = 0; k < s.size(); ++k) acc.add(w[k] * std::exp(-s[k] * log_arg));
        return acc.value();
    }
};

/// kind selects the Gamma_R ratio (V3 carries the four-fold product and the
/// zeta(1+2s) factor); x-arguments are applied separately by the caller.
inline ContourWeights make_contour_weights(VKind kind, double t, const WeightParams& params,
                                           const ContourSpec& contour, int kappa = 0) {
    contour.validate();
    ContourWeights cw;
    cw.with_zeta = (kind == VKind::V3);
    const int n = contour.nodes;
    const double dy = 2.0 * contour.height / n;
    cw.s.reserve(n + 1);
    cw.w.reserve(n + 1);
    for (int k = 0; k <= n; ++k) {
        cplx s(contour.sigma, -contour.height + k * dy);
        cplx lr = (kind == VKind::V3) ? detail::v3_log_ratio(s, t, params.T)
                                      : detail::v1_log_ratio(s, t, kappa);
        cplx w = std::exp(s * s + lr) / s * (dy / kTwoPi);
        if (kind == VKind::V3) w *= specfun::zeta(1.0 + 2.0 * s);
        if (k == 0 || k == n) w *= 0.5;
        cw.s.push_back(s);
        cw.w.push_back(w);
    }
    return cw;
}

/// Scale multiplying x inside the weight: V(x) evaluates the contour sum at
/// x * v_argument_scale(kind).
inline double v_argument_scale(VKind kind, const WeightParams& params, std::int64_t d) {
    switch (kind) {
        case VKind::V1plus: return std::pow(params.T, params.beta);
        case VKind::V1minus: return std::pow(params.T, -params.beta);
        case VKind::V1: return 1.0;
        case VKind::V2: return 1.0 / static_cast<double>(d);
        case VKind::V3: return 1.0;
    }
    return 1.0;
}

/// The exact vertical-line weight (1/2 pi i) int e^{s^2} (arg)^{-s} R(s) ds/s.
inline cplx V_exact(VKind kind, double x, double t, const WeightParams& params,
                    const ContourSpec& contour, std::int64_t d = 1) {
    if (!(x > 0.0)) throw std::domain_error("V_exact: requires x > 0");
    if (contour.sigma <= 0.0) throw std::domain_error("V_exact: pole proximity, sigma must be > 0");
    auto cw = make_contour_weights(kind, t, params, contour);
    return cw.eval_log(std::log(x * v_argument_scale(kind, params, d)));
}

namespace detail {
// order-2 Stirling log-correction for a conjugate pair at parameter tau: the
// 1/tau terms cancel pairwise, so the first nonzero corrections are of size
// 1/(1+4 tau^2): the exact a*log(z+ z-) remainder plus the two-term Stirling
// series of Gamma(z+a)/Gamma(z) summed over the pair.
inline cplx pair_log_correction(cplx s, double tau) {
    const cplx a = 0.5 * s;
    const cplx b3 = a * a * a - 1.5 * a * a + 0.5 * a;  // Bernoulli B3(a)
    const double q = 1.0 + 4.0 * tau * tau;
    const double A1 = 8.0 / q;
    const double A2 = 64.0 / (q * q) - 32.0 / q;
    return a * std::log1p(1.0 / (4.0 * tau * tau)) + 0.5 * (a * a - a) * A1 - b3 / 6.0 * A2;
}
}  // namespace detail

/// Leading Stirling approximant of V(kind):
///   (1/2 pi i) int e^{s^2} (2 pi x S / |t|)^{-s} (1 + corrections) ds/s,
/// with V3 using 4 pi^2 x / |T^2 - t^2| and the zeta(1+2s) factor.  Orders 0
/// and 1 coincide (the 1/t corrections cancel in conjugate pairs); order 2
/// applies the 1/(1+4 t^2) correction polynomial.
inline cplx V_stirling(VKind kind, double x, double t, const WeightParams& params, int order,
                       const ContourSpec& contour = {}, std::int64_t d = 1) {
    if (!(x > 0.0)) throw std::domain_error("V_stirling: requires x > 0");
    if (order < 0 || order > 2) throw std::invalid_argument("V_stirling: order must be 0..2");
    const double at = std::abs(t);
    if (at < 1.0) throw std::domain_error("V_stirling: |t| below admissible window");
    double log_arg;
    if (kind == VKind::V3) {
        const double cond = std::abs(params.T * params.T - t * t);
        if (cond < 8.0 * params.T)
            throw std::domain_error("V_stirling: t too close to T (conductor dropping)");
        log_arg = std::log(4.0 * kPi * kPi * x / cond);
    } else {
        log_arg = std::log(kTwoPi * x * v_argument_scale(kind, params, d) / at);
    }
    const int n = contour.nodes;
    const double dy = 2.0 * contour.height / n;
    KahanSum<cplx> acc;
    for (int k = 0; k <= n; ++k) {
        cplx s(contour.sigma, -contour.height + k * dy);
        cplx f = std::exp(s * s - s * log_arg) / s;
        if (kind == VKind::V3) f *= specfun::zeta(1.0 + 2.0 * s);
        if (order >= 2) {
            if (kind == VKind::V3)
                f *= std::exp(detail::pair_log_correction(s, t + params.T) +
                              detail::pair_log_correction(s, t - params.T));
            else
                f *= std::exp(detail::pair_log_correction(s, t));
        }
        if (k == 0 || k == n) f *= 0.5;
        acc.add(f);
    }
    return acc.value() * (dy / kTwoPi);
}

/// kappa-dependent variant of the uneven weight's Gamma_R ratio (kappa = 0 or
/// 1 according to parity); used to measure the parity-mixing discrepancy.
inline cplx V1_uneven_kappa(bool plus, double x, double t, const WeightParams& params,
                            const ContourSpec& contour, int kappa) {
    if (!(x > 0.0)) throw std::domain_error("V1_uneven_kappa: requires x > 0");
    auto cw = make_contour_weights(plus ? VKind::V1plus : VKind::V1minus, t, params, contour, kappa);
    return cw.eval_log(std::log(x * v_argument_scale(plus ? VKind::V1plus : VKind::V1minus,
                                                     params, 1)));
}

/// Product of the three single contour integrals with arguments
/// (2 pi x1 T^{+-beta}/|y|), (2 pi x2 / (d |y|)), (4 pi^2 x3 / |1-y^2|), the
/// last carrying zeta(1+2s).
inline cplx V_triple(double x1, double x2, double x3, double y, int sign,
                     const WeightParams& params, const ContourSpec& contour, std::int64_t d = 1) {
    if (!(x1 > 0.0 && x2 > 0.0 && x3 > 0.0))
        throw std::domain_error("V_triple: arguments must be positive");
    const double ay = std::abs(y);
    if (ay < 1e-12 || std::abs(ay - 1.0) < 1e-12)
        throw std::domain_error("V_triple: singular at |y| in {0, 1}");
    auto leading = [&](double log_arg, bool with_zeta) {
        const int n = contour.nodes;
        const double dy = 2.0 * contour.height / n;
        KahanSum<cplx> acc;
        for (int k = 0; k <= n; ++k) {
            cplx s(contour.sigma, -contour.height + k * dy);
            cplx f = std::exp(s * s - s * log_arg) / s;
            if (with_zeta) f *= specfun::zeta(1.0 + 2.0 * s);
            if (k == 0 || k == n) f *= 0.5;
            acc.add(f);
        }
        return acc.value() * (dy / kTwoPi);
    };
    const double tb = std::pow(params.T, (sign >= 0 ? 1.0 : -1.0) * params.beta);
    cplx i1 = leading(std::log(kTwoPi * x1 * tb / ay), false);
    cplx i2 = leading(std::log(kTwoPi * x2 / (static_cast<double>(d) * ay)), false);
    cplx i3 = leading(std::log(4.0 * kPi * kPi * x3 / std::abs(1.0 - y * y)), true);
    return i1 * i2 * i3;
}

/// Cubic-spline table of a contour weight over log(arg); used by the
/// coefficient sums, where per-term contour evaluation would dominate.
class VTable {
public:
    VTable() = default;
    VTable(const ContourWeights& cw, double log_lo, double log_hi, int n = 2048) {
        if (log_hi <= log_lo) throw std::invalid_argument("VTable: empty range");
        double dx = (log_hi - log_lo) / (n - 1);
        std::vector<double> y(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            y[static_cast<std::size_t>(i)] = cw.eval_log(log_lo + i * dx).real();
        spline_ = CubicSpline(log_lo, dx, std::move(y));
    }
    double operator()(double log_arg) const { return spline_(log_arg); }

private:
    CubicSpline spline_;
};

}  // namespace specsum::weights
