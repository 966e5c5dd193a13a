// Quadrature kernels: adaptive Gauss-Kronrod 7/15, vertical-line trapezoid
// rules for contour integrals, and finite-difference derivatives.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <queue>
#include <vector>

#include "specsum/common.hpp"

namespace specsum::quad {

// QUADPACK dqk15 abscissae/weights on [-1,1].
inline constexpr double kGK15X[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kGK15WK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kGK15WG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
    cplx integral{};
    double error = 0.0;
};

template <typename F>
PanelResult gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx fc = f(c);
    cplx resk = fc * kGK15WK[7];
    cplx resg = fc * kGK15WG[3];
    for (int j = 0; j < 7; ++j) {
        double x = h * kGK15X[j];
        cplx f1 = f(c - x), f2 = f(c + x);
        resk += (f1 + f2) * kGK15WK[j];
        if (j % 2 == 1) resg += (f1 + f2) * kGK15WG[j / 2];
    }
    PanelResult r;
    r.integral = resk * h;
    r.error = std::abs(resk - resg) * std::abs(h);
    // QUADPACK-style error sharpening
    double scale = std::abs(r.integral);
    if (scale > 0 && r.error > 0) {
        double ratio = 200.0 * r.error / (scale + r.error);
        r.error = std::min(r.error, r.error * std::sqrt(ratio < 1 ? ratio : 1.0));
    }
    return r;
}

struct AdaptiveResult {
    cplx value{};
    double error = 0.0;
    int panels = 0;
};

/// Adaptive bisection GK15 over [a,b].  Initial break points may be supplied
/// to pre-split around known features (integrable singularities, bumps).
template <typename F>
AdaptiveResult integrate(F&& f, double a, double b, const EvalPrecision& prec,
                         double abs_floor = 0.0,
                         const std::vector<double>& breaks = {}) {
    struct Seg {
        double a, b, err;
        cplx val;
        bool operator<(const Seg& o) const { return err < o.err; }
    };
    std::priority_queue<Seg> heap;
    cplx total{};
    double toterr = 0.0;
    int panels = 0;

    std::vector<double> pts;
    pts.push_back(a);
    for (double x : breaks)
        if (x > a && x < b) pts.push_back(x);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());

    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        auto r = gk15(f, pts[i], pts[i + 1]);
        heap.push(Seg{pts[i], pts[i + 1], r.error, r.integral});
        total += r.integral;
        toterr += r.error;
        ++panels;
    }
    int max_panels = std::max(64, prec.max_nodes / 15);
    while (toterr > std::max(prec.rel_tol * std::abs(total), abs_floor) && panels < max_panels) {
        Seg top = heap.top();
        heap.pop();
        double m = 0.5 * (top.a + top.b);
        if (!(m > top.a && m < top.b)) {  // cannot split further
            heap.push(top);
            break;
        }
        auto r1 = gk15(f, top.a, m);
        auto r2 = gk15(f, m, top.b);
        total += r1.integral + r2.integral - top.val;
        toterr += r1.error + r2.error - top.err;
        heap.push(Seg{top.a, m, r1.error, r1.integral});
        heap.push(Seg{m, top.b, r2.error, r2.integral});
        panels += 2;
    }
    if (toterr > std::max(64 * prec.rel_tol * std::abs(total), abs_floor) && panels >= max_panels)
        throw quadrature_error("adaptive quadrature: panel budget exhausted");
    return {total, toterr, panels};
}

template <typename F>
AdaptiveResult integrate_real(F&& f, double a, double b, const EvalPrecision& prec,
                              double abs_floor = 0.0, const std::vector<double>& breaks = {}) {
    return integrate([&](double x) { return cplx(f(x), 0.0); }, a, b, prec, abs_floor, breaks);
}

/// (1/2*pi*i) * int_{(sigma)} f(s) ds truncated at |Im s| <= height, by the
/// trapezoid rule.  Exponentially accurate for integrands with e^{s^2}-type
/// decay along the line.
template <typename F>
cplx contour_line(F&& f, double sigma, double height, int nodes) {
    const double dy = 2.0 * height / nodes;
    KahanSum<cplx> acc;
    for (int k = 0; k <= nodes; ++k) {
        double y = -height + k * dy;
        cplx v = f(cplx(sigma, y));
        if (k == 0 || k == nodes) v *= 0.5;
        acc.add(v);
    }
    return acc.value() * (dy / kTwoPi);
}

/// Central finite differences, orders 1..3 (5- and 7-point stencils).
template <typename F>
double diff_central(F&& f, double x, int order, double h) {
    switch (order) {
        case 1:
            return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
        case 2:
            return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) /
                   (12 * h * h);
        case 3:
            return (f(x + 3 * h) - 8 * f(x + 2 * h) + 13 * f(x + h) - 13 * f(x - h) +
                    8 * f(x - 2 * h) - f(x - 3 * h)) / (8 * h * h * h);
        default:
            throw std::invalid_argument("diff_central: order must be 1..3");
    }
}

}  // namespace specsum::quad
