#include "catch2/catch_amalgamated.hpp"

#include <cmath>
#include <random>

#include "specsum/arith.hpp"

using namespace specsum;
using namespace specsum::arith;

TEST_CASE("quadratic character basics") {
    QuadraticCharacter chi(5);
    CHECK(chi(1) == 1);
    CHECK(chi(2) == -1);  // Euler criterion: 2^2 = 4 = -1 mod 5
    CHECK(chi(10) == 0);
    CHECK(chi(-1) == 1);
    CHECK_THROWS_AS(QuadraticCharacter(7), std::invalid_argument);   // 7 = 3 mod 4
    CHECK_THROWS_AS(QuadraticCharacter(21), std::invalid_argument);  // composite
    for (std::int64_t d : {5, 13, 17, 29}) {
        QuadraticCharacter c(d);
        // Euler-criterion oracle and full multiplicativity
        for (std::int64_t a = 1; a < d; ++a) {
            std::int64_t e = pow_mod(a, (d - 1) / 2, d);
            int want = (e == 1) ? 1 : -1;
            REQUIRE(c(a) == want);
            for (std::int64_t b = 1; b < d; ++b) REQUIRE(c(a * b) == c(a) * c(b));
        }
        int sum = 0;
        for (std::int64_t a = 0; a < d; ++a) sum += c(a);
        CHECK(sum == 0);
    }
}

TEST_CASE("kloosterman sums: examples and structure") {
    CHECK(kloosterman(1, 1, 1) == 1.0);
    CHECK(std::abs(kloosterman(1, 1, 3) - (-1.0)) < 1e-12);
    CHECK(std::abs(kloosterman(1, 1, 3) - 2.0 * std::cos(kTwoPi / 3.0)) < 1e-12);
    CHECK(std::abs(kloosterman(1, 1, 5) - (2.0 + 2.0 * std::cos(4.0 * kPi / 5.0))) < 1e-12);
    CHECK(std::abs(kloosterman(1, 1, 5) - 0.3819660113) < 1e-9);
    // negative frequency reduces mod c
    CHECK(std::abs(kloosterman(-2, 3, 7) - kloosterman(5, 3, 7)) < 1e-12);

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> cd(1, 400), nm(-50, 50);
    for (int i = 0; i < 50; ++i) {
        std::int64_t n = nm(rng), m = nm(rng), c = cd(rng);
        cplx full = kloosterman_complex(n, m, c);
        REQUIRE(std::abs(full.imag()) < 1e-9);
        REQUIRE(std::abs(full.real() - kloosterman(m, n, c)) < 1e-9);  // symmetry
    }
}

TEST_CASE("weil bound holds on enumerated triples") {
    for (std::int64_t n = 1; n <= 3; ++n) {
        for (std::int64_t m = 1; m <= 3; ++m) {
            for (std::int64_t c = 1; c <= 1000; ++c) {
                double s = std::abs(kloosterman(n, m, c));
                double bound = divisor_count(c) * std::sqrt((double)std::gcd(std::gcd(n, m), c)) *
                               std::sqrt((double)c);
                REQUIRE(s <= bound * (1.0 + 1e-9));
            }
        }
    }
}

TEST_CASE("kloosterman CRT multiplicativity") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> pick(2, 100), nm(1, 30);
    int done = 0;
    while (done < 40) {
        std::int64_t c1 = pick(rng), c2 = pick(rng);
        if (std::gcd(c1, c2) != 1) continue;
        std::int64_t n = nm(rng), m = nm(rng);
        std::int64_t c2b = mod_inverse(c2, c1), c1b = mod_inverse(c1, c2);
        double lhs = kloosterman(n, m, c1 * c2);
        double rhs = kloosterman(mod_floor(n * c2b, c1), mod_floor(m * c2b, c1), c1) *
                     kloosterman(mod_floor(n * c1b, c2), mod_floor(m * c1b, c2), c2);
        REQUIRE(std::abs(lhs - rhs) < 1e-8);
        ++done;
    }
}

TEST_CASE("twisted kloosterman sums") {
    QuadraticCharacter chi(5);
    // c = d: direct 4-term enumeration oracle
    for (std::int64_t n : {0, 1, 2}) {
        for (std::int64_t m : {1, 3}) {
            cplx want(0.0, 0.0);
            for (std::int64_t a = 1; a < 5; ++a) {
                std::int64_t inv = mod_inverse(a, 5);
                want += static_cast<double>(chi(a)) * unit_phase(n * a + m * inv, 5);
            }
            CHECK(std::abs(kloosterman_twisted(n, m, 5, chi) - want) < 1e-12);
        }
    }
    CHECK_THROWS_AS(kloosterman_twisted(1, 1, 7, chi), std::invalid_argument);
    // vanishing family: S_chi(d^{k+1} q, l, c d) = 0 when d | c, (l,d)=1
    for (std::int64_t c : {5, 10, 25, 35}) {
        for (std::int64_t q : {1, 2, 3}) {
            for (std::int64_t l : {1, 2, 3, 4, 6}) {
                if (l % 5 == 0) continue;
                for (int k : {0, 1}) {
                    std::int64_t dk1 = (k == 0) ? 5 : 25;
                    REQUIRE(std::abs(kloosterman_twisted(dk1 * q, l, c * 5, chi)) < 1e-9);
                }
            }
        }
    }
    // S_chi(0, r, d) = chi(r) sqrt(d)
    for (std::int64_t r = 1; r < 5; ++r) {
        cplx got = kloosterman_twisted(0, r, 5, chi);
        CHECK(std::abs(got - std::sqrt(5.0) * static_cast<double>(chi(r))) < 1e-9);
    }
}

TEST_CASE("ramanujan sums: two routes agree exactly") {
    CHECK(ramanujan(6, 12) == 2);   // c | r: phi(6)
    CHECK(ramanujan(4, 2) == -2);
    CHECK(ramanujan(5, 1) == -1);
    for (std::int64_t c = 1; c <= 500; ++c) {
        // r mod c determines the sum; covers all |r| <= 500
        for (std::int64_t r = 0; r < c; ++r) {
            auto b = ramanujan_both(c, r);
            REQUIRE(std::abs(b.exponential_form - static_cast<double>(b.divisor_form)) < 1e-6);
        }
    }
}

TEST_CASE("gauss sum identity for all residues") {
    for (std::int64_t d : {5, 13, 17, 29}) {
        QuadraticCharacter chi(d);
        for (std::int64_t r = 0; r < d; ++r) {
            cplx got = gauss_sum(chi, r);
            cplx want = std::sqrt(static_cast<double>(d)) * static_cast<double>(chi(r));
            REQUIRE(std::abs(got - want) < 1e-9);
        }
    }
    QuadraticCharacter chi5(5);
    CHECK(std::abs(gauss_sum(chi5, 1) - std::sqrt(5.0)) < 1e-12);
    CHECK(std::abs(gauss_sum(chi5, 2) + std::sqrt(5.0)) < 1e-12);
    CHECK(std::abs(gauss_sum(chi5, 5)) < 1e-12);
}

TEST_CASE("eisenstein coefficients") {
    CHECK(eisen_lambda(1, 4.2).real() == 1.0);
    CHECK(eisen_lambda(4, 0.0).real() == 3.0);
    CHECK(std::abs(eisen_lambda(2, 1.0).real() - 2.0 * std::cos(std::log(2.0))) < 1e-14);
    CHECK(std::abs(eisen_lambda(2, 1.0).real() - 1.5384778027279443) < 1e-12);
    CHECK(std::abs(eisen_lambda(12, 2.3) - eisen_lambda(12, -2.3)) < 1e-14);
    CHECK_THROWS_AS(eisen_lambda(0, 1.0), std::domain_error);
}

TEST_CASE("eisenstein coefficients satisfy the Hecke relation") {
    for (double t : {0.0, 0.7, 2.3}) {
        std::vector<double> table(2500);
        for (std::int64_t k = 1; k <= 2500; ++k)
            table[static_cast<std::size_t>(k - 1)] = eisen_lambda(k, t).real();
        for (std::int64_t n = 1; n <= 50; ++n) {
            for (std::int64_t m = 1; m <= 50; ++m) {
                double prod = table[n - 1] * table[m - 1];
                double heck = hecke_product(table, n, m);
                REQUIRE(std::abs(prod - heck) < 1e-10);
            }
        }
    }
}

TEST_CASE("cusp-indexed eisenstein coefficients") {
    QuadraticCharacter chi(5);
    CHECK(std::abs(eisen_lambda_cusp(1, 1.3, 1, chi) - 1.0) < 1e-15);
    CHECK(std::abs(eisen_lambda_cusp(1, 1.3, 5, chi) - 1.0) < 1e-15);
    // v = 1, n = 2, t = 0: 1 + chi(2) = 0
    CHECK(std::abs(eisen_lambda_cusp(2, 0.0, 1, chi)) < 1e-15);
    CHECK_THROWS_AS(eisen_lambda_cusp(2, 0.0, 3, chi), std::invalid_argument);
    // multiplicativity on coprime arguments
    for (std::int64_t v : {1, 5}) {
        for (double t : {0.0, 0.7}) {
            cplx lhs = eisen_lambda_cusp(6, t, v, chi);
            cplx rhs = eisen_lambda_cusp(2, t, v, chi) * eisen_lambda_cusp(3, t, v, chi);
            REQUIRE(std::abs(lhs - rhs) < 1e-13);
        }
    }
}

namespace {
// deterministic multiplicative table from Chebyshev-recursion prime data
std::vector<double> synthetic_table(std::size_t n_max, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> th(0.0, kPi);
    std::vector<double> lam(n_max + 1, 0.0);
    lam[1] = 1.0;
    std::vector<double> cosths(n_max + 1, 0.0);
    for (std::size_t n = 2; n <= n_max; ++n) {
        // smallest prime factor
        std::size_t p = 2;
        while (n % p != 0) ++p;
        if (n == p) cosths[p] = std::cos(th(rng));
        std::size_t m = n, e = 0;
        while (m % p == 0) { m /= p; ++e; }
        if (m == 1) {
            // lambda(p^e) by U_e(cos theta) recursion
            double x = 2.0 * cosths[p];
            double um1 = 1.0, u = x / 1.0;  // U_0, U_1(cos)=2cos
            if (e == 1) { lam[n] = x; continue; }
            for (std::size_t j = 2; j <= e; ++j) {
                double up = x * u - um1;
                um1 = u;
                u = up;
            }
            lam[n] = u;
        } else {
            std::size_t pe = n / m;
            lam[n] = lam[pe] * lam[m];
        }
    }
    return std::vector<double>(lam.begin() + 1, lam.end());
}
}  // namespace

TEST_CASE("hecke product identities") {
    auto table = synthetic_table(4000, 99);
    // (1, k)
    for (std::int64_t k : {1, 5, 12}) CHECK(hecke_product(table, 1, k) == table[k - 1]);
    // lambda(2)^2 = lambda(4) + 1 for the Eisenstein table
    std::vector<double> et(100);
    for (std::int64_t k = 1; k <= 100; ++k) et[k - 1] = eisen_lambda(k, 0.77).real();
    CHECK(std::abs(et[1] * et[1] - (et[3] + 1.0)) < 1e-13);
    // forward relation: lambda(n) lambda(m) = sum_{l|(n,m)} lambda(nm/l^2)
    for (std::int64_t n : {2, 6, 12, 30}) {
        for (std::int64_t m : {4, 9, 10, 18}) {
            REQUIRE(std::abs(table[n - 1] * table[m - 1] - hecke_product(table, n, m)) < 1e-12);
        }
    }
    // inverse relation: lambda(mn) = sum_{l|(n,m)} mu(l) lambda(m/l) lambda(n/l)
    for (std::int64_t n : {2, 6, 12}) {
        for (std::int64_t m : {4, 10, 18}) {
            double rhs = 0.0;
            for (std::int64_t l : divisors(std::gcd(n, m)))
                rhs += mobius(l) * table[m / l - 1] * table[n / l - 1];
            REQUIRE(std::abs(table[n * m - 1] - rhs) < 1e-12);
        }
    }
    CHECK_THROWS_AS(hecke_product(std::vector<double>{1.0, 0.5}, 4, 4),
                    insufficient_coefficients);
}

TEST_CASE("poisson character-sum evaluation") {
    // l1 = 0 mod d: rhs vanishes identically and so does lhs
    auto z = check_poisson_charsum(1, 5, 1, 5, 2);
    CHECK(std::abs(z.rhs) < 1e-12);
    CHECK(std::abs(z.lhs) < 1e-6 * 5);
    auto a = check_poisson_charsum(1, 5, 1, 1, 1);
    CHECK(a.residual() < 1e-6 * 5);
    auto b = check_poisson_charsum(2, 5, 3, 2, 1);
    CHECK(b.residual() < 1e-6 * 10);
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<std::int64_t> cpick(1, 12), rpick(-20, 20), lpick(-8, 8);
    for (int i = 0; i < 20; ++i) {
        std::int64_t c = cpick(rng);
        auto r = check_poisson_charsum(c, 5, rpick(rng), lpick(rng), lpick(rng));
        REQUIRE(r.residual() < 1e-6 * (5 * c));
    }
    CHECK_THROWS_AS(check_poisson_charsum(5000, 5, 1, 1, 1), std::invalid_argument);
}

TEST_CASE("CRT splitting of the twisted sum") {
    auto a = check_crt_split(3, 5, 1, 1, 1, 0);
    CHECK(a.residual() < 1e-9);
    auto b = check_crt_split(7, 5, 2, 10, 3, 1);
    CHECK(b.residual() < 1e-9);
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<std::int64_t> cpick(1, 40), qpick(1, 30), lpick(1, 14);
    int done = 0;
    while (done < 25) {
        std::int64_t c = cpick(rng);
        if (c % 5 == 0) continue;
        std::int64_t l3 = lpick(rng), l2 = lpick(rng);
        if (l3 % 5 == 0 || l2 % 5 == 0) continue;
        int k = static_cast<int>(done % 2);
        std::int64_t l1 = l3 * ((k == 1) ? 5 : 1);
        auto r = check_crt_split(c, 5, qpick(rng), l1, l2, k);
        REQUIRE(r.residual() < 1e-9);
        ++done;
    }
    CHECK_THROWS_AS(check_crt_split(10, 5, 1, 1, 1, 0), std::invalid_argument);
    CHECK_THROWS_AS(check_crt_split(3, 5, 1, 1, 5, 0), std::invalid_argument);
}
