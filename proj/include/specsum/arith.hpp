// Exact exponential sums and multiplicative machinery: the real quadratic
// character of prime modulus d == 1 mod 4, Kloosterman sums (plain and
// character-twisted), Ramanujan and Gauss sums, Eisenstein Hecke
// coefficients, and the Poisson/CRT exponential-sum identities verified by
// direct enumeration.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "specsum/common.hpp"

namespace specsum::arith {

using std::int64_t;

inline cplx unit_phase(int64_t num, int64_t den) {
    // e(num/den) with num reduced mod den first
    double frac = static_cast<double>(mod_floor(num, den)) / static_cast<double>(den);
    return cplx(std::cos(kTwoPi * frac), std::sin(kTwoPi * frac));
}

/// Real quadratic character chi_d of prime modulus d == 1 mod 4 (so that
/// chi_d(-1) = +1).  Values tabulated by marking quadratic residues.
class QuadraticCharacter {
public:
    explicit QuadraticCharacter(int64_t d) : d_(d), table_(static_cast<std::size_t>(d), -1) {
        if (d < 5 || d % 4 != 1 || !is_prime(d))
            throw std::invalid_argument("QuadraticCharacter: modulus must be prime and 1 mod 4");
        table_[0] = 0;
        for (int64_t a = 1; a < d; ++a) {
            int64_t sq = mul_mod(a, a, d);
            table_[static_cast<std::size_t>(sq)] = 1;
        }
    }

    int64_t modulus() const { return d_; }
    int operator()(int64_t a) const { return table_[static_cast<std::size_t>(mod_floor(a, d_))]; }

private:
    int64_t d_;
    std::vector<int> table_;
};

inline int char_value(const QuadraticCharacter& chi, int64_t a) { return chi(a); }

inline constexpr int64_t kEnumerationCap = 1'000'000;

/// Kloosterman sum S(n,m,c) = sum*_{a mod c} e((n a + m a^{-1})/c).
/// Returns the full complex accumulation; the value is real by the a <-> a^{-1}
/// pairing, which callers may assert.
inline cplx kloosterman_complex(int64_t n, int64_t m, int64_t c) {
    if (c < 1) throw std::invalid_argument("kloosterman: c must be >= 1");
    if (c > kEnumerationCap) throw std::invalid_argument("kloosterman: c exceeds enumeration cap");
    if (c == 1) return cplx(1.0, 0.0);
    n = mod_floor(n, c);
    m = mod_floor(m, c);
    KahanSum<cplx> acc;
    for (int64_t a = 1; a < c; ++a) {
        int64_t inv = mod_inverse(a, c);
        if (inv < 0) continue;
        acc.add(unit_phase(n * a + m * inv, c));
    }
    return acc.value();
}

inline double kloosterman(int64_t n, int64_t m, int64_t c) {
    return kloosterman_complex(n, m, c).real();
}

/// Twisted Kloosterman sum S_chi(n,m,c) = sum*_{a mod c} chi_d(a) e((n a + m a^{-1})/c),
/// defined for d | c.
inline cplx kloosterman_twisted(int64_t n, int64_t m, int64_t c, const QuadraticCharacter& chi) {
    if (c < 1) throw std::invalid_argument("kloosterman_twisted: c must be >= 1");
    if (c % chi.modulus() != 0)
        throw std::invalid_argument("kloosterman_twisted: requires d | c");
    if (c > kEnumerationCap)
        throw std::invalid_argument("kloosterman_twisted: c exceeds enumeration cap");
    n = mod_floor(n, c);
    m = mod_floor(m, c);
    KahanSum<cplx> acc;
    for (int64_t a = 1; a < c; ++a) {
        int ch = chi(a);
        if (ch == 0) continue;
        int64_t inv = mod_inverse(a, c);
        if (inv < 0) continue;
        acc.add(static_cast<double>(ch) * unit_phase(n * a + m * inv, c));
    }
    return acc.value();
}

struct RamanujanSum {
    int64_t divisor_form;   // sum_{c'|(c,r)} mu(c/c') c'
    double exponential_form;  // Re sum*_{b mod c} e(b r / c)
};

/// Ramanujan sum by both routes; they must agree exactly (after rounding the
/// enumeration), which callers assert.
inline RamanujanSum ramanujan_both(int64_t c, int64_t r) {
    if (c < 1) throw std::invalid_argument("ramanujan: c must be >= 1");
    if (c > kEnumerationCap) throw std::invalid_argument("ramanujan: c exceeds enumeration cap");
    RamanujanSum out{};
    int64_t g = (r == 0) ? c : std::gcd(c, std::abs(r));
    int64_t dsum = 0;
    for (int64_t cp = 1; cp <= g; ++cp)
        if (g % cp == 0) dsum += mobius(c / cp) * cp;
    out.divisor_form = dsum;
    KahanSum<cplx> acc;
    for (int64_t b = 0; b < c; ++b) {
        if (std::gcd(b, c) != 1) continue;
        acc.add(unit_phase(b * mod_floor(r, c), c));
    }
    out.exponential_form = acc.value().real();
    return out;
}

inline int64_t ramanujan(int64_t c, int64_t r) { return ramanujan_both(c, r).divisor_form; }

/// Gauss sum sum*_{a mod d} chi_d(a) e(a r / d); equals sqrt(d) chi_d(r) for
/// d == 1 mod 4.
inline cplx gauss_sum(const QuadraticCharacter& chi, int64_t r) {
    const int64_t d = chi.modulus();
    KahanSum<cplx> acc;
    for (int64_t a = 1; a < d; ++a) acc.add(static_cast<double>(chi(a)) * unit_phase(a * r, d));
    return acc.value();
}

/// Eisenstein Hecke coefficient lambda(n,t) = sum_{ab=n} (a/b)^{it}; real.
inline cplx eisen_lambda(int64_t n, double t) {
    if (n < 1) throw std::domain_error("eisen_lambda: n must be positive");
    const double ln = std::log(static_cast<double>(n));
    KahanSum<double> acc;
    for (int64_t a : divisors(n)) {
        acc.add(std::cos(t * (2.0 * std::log(static_cast<double>(a)) - ln)));
    }
    return cplx(acc.value(), 0.0);
}

/// Cusp-indexed Eisenstein coefficient lambda_v(n,t) = sum_{ab=n} chi_v(a)
/// chi_{d/v}(b) (a/b)^{it}, for v | d (prime d: v = 1 or v = d); chi_1 = 1.
inline cplx eisen_lambda_cusp(int64_t n, double t, int64_t v, const QuadraticCharacter& chi) {
    if (n < 1) throw std::domain_error("eisen_lambda_cusp: n must be positive");
    const int64_t d = chi.modulus();
    if (v < 1 || d % v != 0) throw std::invalid_argument("eisen_lambda_cusp: v must divide d");
    const double ln = std::log(static_cast<double>(n));
    KahanSum<cplx> acc;
    for (int64_t a : divisors(n)) {
        int64_t b = n / a;
        int ca = (v == 1) ? 1 : chi(a);        // chi_v
        int cb = (v == d) ? 1 : chi(b);        // chi_{d/v}
        int coeff = ca * cb;
        if (coeff == 0) continue;
        double ang = t * (2.0 * std::log(static_cast<double>(a)) - ln);
        acc.add(static_cast<double>(coeff) * cplx(std::cos(ang), std::sin(ang)));
    }
    return acc.value();
}

/// Hecke product sum_{l | (n,m)} lambda(nm/l^2) from a 1-based table.
inline double hecke_product(const std::vector<double>& lambda_table, int64_t n, int64_t m) {
    if (n < 1 || m < 1) throw std::invalid_argument("hecke_product: indices must be positive");
    KahanSum<double> acc;
    int64_t g = std::gcd(n, m);
    for (int64_t l : divisors(g)) {
        int64_t idx = (n / l) * (m / l);
        if (idx < 1 || static_cast<std::size_t>(idx) > lambda_table.size())
            throw insufficient_coefficients("hecke_product: table misses index " + std::to_string(idx));
        acc.add(lambda_table[static_cast<std::size_t>(idx - 1)]);
    }
    return acc.value();
}

struct IdentityCheck {
    cplx lhs;
    cplx rhs;
    double residual() const { return std::abs(lhs - rhs); }
};

/// Both sides of the Poisson character-sum evaluation
///   sum_{a1,a2 mod cd} chi_d(a2) S(-a1 a2, r, cd) e((a1 l1 + a2 l2)/cd)
///     = cd sum*_{a3 mod cd} chi_d(l1 a3) e(a3 (r + l1 l2)/cd),
/// by direct enumeration (cd capped at 10^4).
inline IdentityCheck check_poisson_charsum(int64_t c, int64_t d, int64_t r, int64_t l1, int64_t l2) {
    const QuadraticCharacter chi(d);
    const int64_t q = c * d;
    if (q > 10'000) throw std::invalid_argument("check_poisson_charsum: cd exceeds enumeration cap");
    // S(-k, r, cd) for all k
    std::vector<cplx> S(static_cast<std::size_t>(q));
    for (int64_t k = 0; k < q; ++k) {
        KahanSum<cplx> acc;
        for (int64_t a = 1; a < q; ++a) {
            int64_t inv = mod_inverse(a, q);
            if (inv < 0) continue;
            acc.add(unit_phase(-k * a + r * inv, q));
        }
        S[static_cast<std::size_t>(k)] = acc.value();
    }
    std::vector<cplx> phase(static_cast<std::size_t>(q));
    for (int64_t j = 0; j < q; ++j) phase[static_cast<std::size_t>(j)] = unit_phase(j, q);

    KahanSum<cplx> lhs;
    for (int64_t a1 = 0; a1 < q; ++a1) {
        for (int64_t a2 = 0; a2 < q; ++a2) {
            int ch = chi(a2);
            if (ch == 0) continue;
            int64_t k = mul_mod(a1, a2, q);
            int64_t ph = mod_floor(a1 * l1 + a2 * l2, q);
            lhs.add(static_cast<double>(ch) * S[static_cast<std::size_t>(k)] *
                    phase[static_cast<std::size_t>(ph)]);
        }
    }
    KahanSum<cplx> rhs;
    for (int64_t a3 = 1; a3 < q; ++a3) {
        if (std::gcd(a3, q) != 1) continue;
        int ch = chi(l1 * a3);
        if (ch == 0) continue;
        rhs.add(static_cast<double>(ch) * unit_phase(a3 * (r + l1 * l2), q));
    }
    return {lhs.value(), static_cast<double>(q) * rhs.value()};
}

/// Both sides of the CRT splitting identity, for (c,d)=1, (l2,d)=1,
/// l1 = d^k l3 with (l3,d)=1:
///   chi_d(c l2) S(q, dbar l1 l2, c) = d^{-1/2} chi_d(l3) S_chi(d^{k+1} q, l3 l2, c d).
inline IdentityCheck check_crt_split(int64_t c, int64_t d, int64_t q, int64_t l1, int64_t l2,
                                     int k) {
    const QuadraticCharacter chi(d);
    if (std::gcd(c, d) != 1) throw std::invalid_argument("check_crt_split: need (c,d)=1");
    if (std::gcd(mod_floor(l2, d), d) != 1)
        throw std::invalid_argument("check_crt_split: need (l2,d)=1");
    int64_t l3 = l1;
    for (int j = 0; j < k; ++j) {
        if (l3 % d != 0) throw std::invalid_argument("check_crt_split: l1 != d^k l3");
        l3 /= d;
    }
    if (std::gcd(mod_floor(l3, d), d) != 1)
        throw std::invalid_argument("check_crt_split: need (l3,d)=1");
    cplx lhs;
    if (c == 1) {
        lhs = static_cast<double>(chi(c * l2)) * cplx(1.0, 0.0);
    } else {
        int64_t dbar = mod_inverse(d, c);
        lhs = static_cast<double>(chi(c * l2)) *
              kloosterman_complex(q, mod_floor(dbar * mod_floor(l1 * l2, c), c), c);
    }
    int64_t dk1 = 1;
    for (int j = 0; j <= k; ++j) dk1 *= d;
    cplx rhs = std::pow(static_cast<double>(d), -0.5) * static_cast<double>(chi(l3)) *
               kloosterman_twisted(dk1 * q, l3 * l2, c * d, chi);
    return {lhs, rhs};
}

}  // namespace specsum::arith
