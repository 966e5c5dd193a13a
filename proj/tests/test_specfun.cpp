#include "catch2/catch_amalgamated.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "specsum/specfun.hpp"

using namespace specsum;
namespace sf = specsum::specfun;

namespace {
double rel_err(cplx got, cplx want) { return std::abs(got - want) / std::abs(want); }
}

TEST_CASE("gamma at classical points") {
    CHECK(rel_err(sf::gamma(cplx(1.0, 0.0)), 1.0) < 1e-14);
    CHECK(rel_err(sf::gamma(cplx(5.0, 0.0)), 24.0) < 1e-13);
    CHECK(rel_err(sf::gamma(cplx(0.5, 0.0)), std::sqrt(kPi)) < 1e-14);
    CHECK_THROWS_AS(sf::gamma(cplx(0.0, 0.0)), std::domain_error);
    CHECK_THROWS_AS(sf::gamma(cplx(-3.0, 0.0)), std::domain_error);
}

TEST_CASE("gamma recurrence on random window") {
    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> re(-10.0, 10.0), im(-150.0, 150.0);
    int tested = 0;
    while (tested < 10000) {
        cplx z(re(rng), im(rng));
        // keep clear of the pole line
        if (z.real() < 0.5 && std::abs(z.imag()) < 0.1 &&
            std::abs(z.real() - std::round(z.real())) < 0.1)
            continue;
        cplx lhs = sf::gamma(z + 1.0), rhs = z * sf::gamma(z);
        REQUIRE(rel_err(lhs, rhs) < 1e-11);
        ++tested;
    }
}

TEST_CASE("gamma modulus identity on the imaginary axis") {
    for (double t : {0.5, 1.0, 5.0, 20.0}) {
        double got = std::norm(sf::gamma(cplx(0.0, t)));
        double want = kPi / (t * std::sinh(kPi * t));
        CHECK(std::abs(got - want) / want < 1e-10);
    }
}

TEST_CASE("gamma accuracy high on the imaginary direction") {
    // Re log Gamma(0.5+it) = (1/2) log(pi/cosh(pi t)); the raw value underflows
    // past t ~ 440, so the check runs in log space.
    for (double t : {50.0, 200.0, 500.0}) {
        double got = sf::log_gamma(cplx(0.5, t)).real();
        double want = 0.5 * (std::log(kPi) - kPi * t + std::log(2.0) -
                             std::log1p(std::exp(-2.0 * kPi * t)));
        // |Delta log| is the relative error of Gamma itself
        CHECK(std::abs(got - want) < 1.5e-12);
    }
}

TEST_CASE("gamma_R values") {
    CHECK(rel_err(sf::gamma_R(cplx(1.0, 0.0)), 1.0) < 1e-14);
    CHECK(rel_err(sf::gamma_R(cplx(2.0, 0.0)), 1.0 / kPi) < 1e-14);
    CHECK(rel_err(sf::gamma_R(cplx(4.0, 0.0)), 1.0 / (kPi * kPi)) < 1e-14);
    CHECK_THROWS_AS(sf::gamma_R(cplx(0.0, 0.0)), std::domain_error);
    CHECK_THROWS_AS(sf::gamma_R(cplx(-2.0, 0.0)), std::domain_error);
}

TEST_CASE("stirling approximation error decays like 1/t") {
    // relative discrepancy |approx/exact - 1| via log differences, so large-t
    // comparisons survive underflow of the raw values
    auto relerr = [&](double sigma, double g, double t, int order) {
        cplx dlog = sf::stirling_log_gamma(sigma, g, t, order) - sf::log_gamma(cplx(sigma, g + t));
        return std::abs(std::exp(dlog) - 1.0);
    };
    double e100 = relerr(0.5, 0.0, 100.0, 0);
    double e1000 = relerr(0.5, 0.0, 1000.0, 0);
    CHECK(e100 < 3e-3);
    double ratio = e1000 / e100;
    CHECK(ratio > 0.05);
    CHECK(ratio < 0.2);
    // |approx/exact| -> 1 along t
    double d1 = std::abs(std::exp(sf::stirling_log_gamma(1.0, 0.0, 100.0, 0).real() -
                                  sf::log_gamma(cplx(1.0, 100.0)).real()) - 1.0);
    double d2 = std::abs(std::exp(sf::stirling_log_gamma(1.0, 0.0, 3000.0, 0).real() -
                                  sf::log_gamma(cplx(1.0, 3000.0)).real()) - 1.0);
    CHECK(d2 < d1);
    CHECK(d2 < 1e-4);
    // order-1/2 corrections sharpen the approximation
    CHECK(relerr(0.8, 0.3, 100.0, 1) < 0.05 * relerr(0.8, 0.3, 100.0, 0));
    CHECK(relerr(0.8, 0.3, 100.0, 2) < 0.2 * relerr(0.8, 0.3, 100.0, 1));
    CHECK_THROWS_AS(sf::stirling_gamma(0.5, 0.0, 0.5, 0), std::domain_error);
}

TEST_CASE("zeta special values") {
    CHECK(rel_err(sf::zeta(cplx(2.0, 0.0)), kPi * kPi / 6.0) < 1e-12);
    CHECK(std::abs(sf::zeta(cplx(0.0, 0.0)) - cplx(-0.5, 0.0)) < 1e-12);
    CHECK(std::abs(sf::zeta(cplx(0.5, 14.134725))) < 1e-4);
    CHECK_THROWS_AS(sf::zeta(cplx(1.0, 0.0)), std::domain_error);
    // a couple of frozen cross-checks
    CHECK(rel_err(sf::zeta(cplx(0.5, 0.0)), -1.4603545088095868) < 1e-12);
    CHECK(std::norm(sf::zeta(cplx(0.5, 30.0))) == Catch::Approx(0.35524999574728991).epsilon(1e-10));
}

TEST_CASE("zeta functional equation on a strip grid") {
    // zeta(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s) zeta(1-s)
    int n = 0;
    for (double sig : {0.1, 0.3, 0.5, 0.7, 0.9}) {
        for (double ti : {-40.0, -17.0, -5.0, -1.3, 2.0, 4.7, 11.0, 23.0, 61.0, 130.0}) {
            cplx s(sig, ti);
            cplx lhs = sf::zeta(s);
            cplx rhs = std::pow(cplx(2.0, 0.0), s) * std::pow(cplx(kPi, 0.0), s - 1.0) *
                       std::sin(kPi * s / 2.0) * sf::gamma(1.0 - s) * sf::zeta(1.0 - s);
            REQUIRE(std::abs(lhs - rhs) / std::abs(lhs) < 1e-9);
            ++n;
        }
    }
    CHECK(n == 50);
}

TEST_CASE("hurwitz zeta consistency") {
    cplx s(1.7, 8.0);
    CHECK(std::abs(sf::hurwitz_zeta(s, 1.0) - sf::zeta(s)) < 1e-12);
    // zeta(s, 1/2) = (2^s - 1) zeta(s)
    cplx lhs = sf::hurwitz_zeta(s, 0.5);
    cplx rhs = (std::pow(cplx(2.0, 0.0), s) - 1.0) * sf::zeta(s);
    CHECK(std::abs(lhs - rhs) / std::abs(rhs) < 1e-11);
}

TEST_CASE("dirichlet L for chi_5") {
    arith::QuadraticCharacter chi(5);
    // oracle: direct series grouped over full periods (period sums vanish, so
    // the blocks decay like k^{-3})
    auto oracle_L1 = [&]() {
        KahanSum<double> acc;
        for (std::int64_t k = 60000; k >= 0; --k) {
            double block = 0.0;
            for (std::int64_t j = 1; j <= 4; ++j)
                block += chi(j) / static_cast<double>(5 * k + j);
            acc.add(block);
        }
        return acc.value();
    };
    double l1 = oracle_L1();
    CHECK(std::abs(l1 - 0.4304089409640040) < 1e-9);  // golden-ratio closed form
    CHECK(std::abs(sf::dirichlet_L(cplx(1.0, 0.0), chi).real() - l1) < 1e-9);
    // s = 2: absolutely convergent series oracle
    KahanSum<double> acc2;
    for (std::int64_t n = 200000; n >= 1; --n) acc2.add(chi(n) / static_cast<double>(n * n));
    CHECK(std::abs(sf::dirichlet_L(cplx(2.0, 0.0), chi).real() - acc2.value()) < 1e-10);
    // trivial zero at s = 0 for even character
    CHECK(std::abs(sf::dirichlet_L(cplx(0.0, 0.0), chi)) < 1e-12);
}

TEST_CASE("completed functional equations, Eisenstein analog") {
    // xi(s+it) xi(s-it) is invariant under s -> 1-s, with xi(s) = Gamma_R(s) zeta(s);
    // same for the chi_d-twist with the conductor factor d^s.
    const double t0 = 3.7;
    arith::QuadraticCharacter chi(5);
    auto lam = [&](cplx s) {
        return sf::gamma_R(s + cplx(0, t0)) * sf::gamma_R(s - cplx(0, t0)) *
               sf::zeta(s + cplx(0, t0)) * sf::zeta(s - cplx(0, t0));
    };
    auto lam_chi = [&](cplx s) {
        return std::pow(cplx(5.0, 0.0), s) * sf::gamma_R(s + cplx(0, t0)) *
               sf::gamma_R(s - cplx(0, t0)) * sf::dirichlet_L(s + cplx(0, t0), chi) *
               sf::dirichlet_L(s - cplx(0, t0), chi);
    };
    for (double sig : {0.3, 0.45, 0.6, 0.8}) {
        for (double ti : {0.0, 1.1, 2.6}) {
            cplx s(sig, ti);
            CHECK(std::abs(lam(s) - lam(1.0 - s)) / std::abs(lam(s)) < 1e-8);
            CHECK(std::abs(lam_chi(s) - lam_chi(1.0 - s)) / std::abs(lam_chi(s)) < 1e-8);
        }
    }
}

TEST_CASE("exponential integral") {
    CHECK(std::abs(sf::expint_Ei(1.0) - 1.8951178163559368) < 1e-12);
    // small-x asymptotic Ei(x) = log|x| + gamma + O(x)
    double x = 1e-6;
    CHECK(std::abs(sf::expint_Ei(x) - (std::log(x) + kEulerGamma)) < 2e-6);
    // odd part identity: Ei(x) - Ei(-x) = 2 sum_{n odd} x^n/(n n!)
    auto odd_oracle = [](double xx) {
        long double s = 0.0L, term = xx;
        for (int n = 1; n < 60; n += 2) {
            s += term / n;
            term *= (long double)xx * xx / ((n + 1.0L) * (n + 2.0L));
        }
        return 2.0 * static_cast<double>(s);
    };
    double lhs = sf::expint_Ei(0.5) - sf::expint_Ei(-0.5);
    CHECK(std::abs(lhs - odd_oracle(0.5)) < 1e-13);
    CHECK(std::abs(lhs - 1.0139934996393344) < 1e-12);
    // derivative: d/dx Ei(x) = e^x / x by central differences
    for (double x0 : {0.7, 2.0, -1.5}) {
        double h = 1e-4;
        double fd = (sf::expint_Ei(x0 + h) - sf::expint_Ei(x0 - h)) / (2 * h);
        CHECK(std::abs(fd - std::exp(x0) / x0) < 1e-6);
    }
    CHECK_THROWS_AS(sf::expint_Ei(0.0), std::domain_error);
    // Ei(1)/e, used by the closed-form diagonal later
    CHECK(std::abs(sf::expint_Ei(1.0) / std::exp(1.0) - 0.6971748832350661) < 1e-12);
}

TEST_CASE("bessel J of integer order") {
    CHECK(std::abs(sf::bessel_J(0, 1e-8) - 1.0) < 1e-8);
    CHECK(std::abs(sf::bessel_J(1, 1e-8)) < 1e-8);
    CHECK(std::abs(sf::bessel_J(0, 2.404825557695773)) < 1e-8);
    // series oracle at moderate order/argument
    auto series = [](int nu, double x) {
        long double q = -0.25L * (long double)x * x;
        long double lt = -std::lgamma((long double)nu + 1.0L) + nu * std::log(0.5L * (long double)x);
        long double term = std::exp(lt), sum = term;
        for (int k = 1; k < 200; ++k) {
            term *= q / ((long double)k * (k + nu));
            sum += term;
            if (std::abs((double)term) < 1e-20 * std::abs((double)sum)) break;
        }
        return (double)sum;
    };
    for (int nu : {2, 7, 30, 50}) {
        for (double x : {0.5, 5.0, 10.0, 25.0}) {
            double want = series(nu, x);
            double got = sf::bessel_J(nu, x);
            REQUIRE(std::abs(got - want) <= 1e-10 * (1.0 + std::abs(want)));
        }
    }
    // three-term recurrence at large argument (asymptotic branch)
    for (double x : {100.0, 9000.0}) {
        for (int nu : {1, 5, 40}) {
            double lhs = sf::bessel_J(nu - 1, x) + sf::bessel_J(nu + 1, x);
            double rhs = 2.0 * nu / x * sf::bessel_J(nu, x);
            REQUIRE(std::abs(lhs - rhs) < 1e-10);
        }
    }
    // smallness bound |J_{k-1}(x)| <= (x/2)^{k-1}/Gamma(k)
    for (double x : {1.0, 5.0}) {
        int k = 60;
        double bound = std::exp((k - 1) * std::log(x / 2) - std::lgamma((double)k));
        CHECK(std::abs(sf::bessel_J(k - 1, x)) <= bound * (1.0 + 1e-9));
    }
}

TEST_CASE("bessel J of imaginary order: integral vs series") {
    // order-0 reduction
    CHECK(std::abs(sf::bessel_J_imag(0.0, 0.3).real() - sf::bessel_J(0, kTwoPi * 0.3)) < 1e-9);
    CHECK(sf::bessel_J_imag(0.0, 0.3).imag() == 0.0);
    // conjugate-pair symmetry: J_{2it} - J_{-2it} purely imaginary
    cplx jp = sf::bessel_J_imag(1.0, 1.0), jm = sf::bessel_J_imag(-1.0, 1.0);
    CHECK(std::abs((jp - jm).real()) < 1e-9);
    CHECK(std::abs(jm - std::conj(jp)) < 1e-12);
    // frozen external value: J_{2i}(2 pi)
    cplx frozen(1.5774329876378055, -3.2231339089946853);
    CHECK(std::abs(sf::bessel_J_imag(1.0, 1.0) - frozen) < 1e-8);
    CHECK(std::abs(sf::bessel_J_imag_series(1.0, 1.0) - frozen) < 1e-10);
    // dual-route agreement across the stated window
    for (double x : {0.5, 1.0, 2.0}) {
        for (double t : {0.5, 2.0, 5.0}) {
            cplx a = sf::bessel_J_imag(t, x);
            cplx b = sf::bessel_J_imag_series(t, x);
            REQUIRE(std::abs(a - b) <= 1e-7 * (1.0 + std::abs(b)));
        }
    }
}

TEST_CASE("bessel K of imaginary order") {
    // t = 0: K_0(2 pi), frozen external value and series oracle
    double k0 = sf::bessel_K_imag(0.0, 1.0);
    CHECK(std::abs(k0 - 9.16584360904370e-4) < 1e-12);
    CHECK(std::abs(k0 - sf::bessel_K_imag_series(0.0, 1.0)) < 1e-12);
    // frozen: K_{2i}(2 pi), K_{10i}(4 pi)
    CHECK(std::abs(sf::bessel_K_imag(1.0, 1.0) - 6.801556371909518e-4) < 1e-12);
    CHECK(std::abs(sf::bessel_K_imag(5.0, 2.0) - 2.1625241713919398e-8) < 1e-14);
    // exponential decay envelope
    CHECK(sf::bessel_K_imag(0.0, 2.0) / sf::bessel_K_imag(0.0, 1.0) <
          std::exp(-kTwoPi) * 10.0);
    // dual-route agreement
    for (double x : {0.5, 1.0, 2.0}) {
        for (double t : {0.5, 2.0, 5.0}) {
            double a = sf::bessel_K_imag(t, x);
            double b = sf::bessel_K_imag_series(t, x);
            REQUIRE(std::abs(a - b) <= 1e-7 * (1.0 + std::abs(b)));
        }
    }
}

TEST_CASE("digamma sanity") {
    CHECK(std::abs(sf::digamma(1.0) + kEulerGamma) < 1e-13);
    CHECK(std::abs(sf::digamma(0.5) + kEulerGamma + 2.0 * std::log(2.0)) < 1e-13);
}
