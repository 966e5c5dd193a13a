// Core shared utilities: precision policy, compensated summation, integer
// helpers and deterministic chunked parallelism.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <future>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace specsum {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 6.28318530717958647692528676655900577;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
inline constexpr double kSqrtTwoPi = 2.50662827463100050241576528481104525;

/// Tolerance policy threaded through every quadrature and series evaluation.
struct EvalPrecision {
    double rel_tol = 1e-10;
    int max_nodes = 1 << 18;

    EvalPrecision() = default;
    EvalPrecision(double tol, int nodes) : rel_tol(tol), max_nodes(nodes) { validate(); }
    void validate() const {
        if (!(rel_tol > 0.0 && rel_tol < 1.0))
            throw std::invalid_argument("EvalPrecision: rel_tol must lie in (0,1)");
        if (max_nodes < 16)
            throw std::invalid_argument("EvalPrecision: max_nodes must be >= 16");
    }
};

/// Raised when an adaptive scheme cannot reach the requested tolerance.
class quadrature_error : public std::runtime_error {
public:
    explicit quadrature_error(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a coefficient table is too short for the requested sum.
class insufficient_coefficients : public std::runtime_error {
public:
    explicit insufficient_coefficients(const std::string& what) : std::runtime_error(what) {}
};

// Kahan-Neumaier compensated accumulator.
template <typename T>
class KahanSum {
public:
    void add(const T& x) {
        T t = sum_ + x;
        if constexpr (std::is_same_v<T, cplx>) {
            comp_ += cplx(branch(sum_.real(), x.real(), t.real()),
                          branch(sum_.imag(), x.imag(), t.imag()));
        } else {
            comp_ += branch(sum_, x, t);
        }
        sum_ = t;
    }
    T value() const { return sum_ + comp_; }

private:
    static double branch(double s, double x, double t) {
        return std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    }
    T sum_{};
    T comp_{};
};

// ---------------------------------------------------------------------------
// Integer helpers (all exact, 64-bit).

inline std::int64_t mod_floor(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

inline std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>((__int128)a * b % m);
}

inline std::int64_t pow_mod(std::int64_t a, std::int64_t e, std::int64_t m) {
    a = mod_floor(a, m);
    std::int64_t r = 1 % m;
    while (e > 0) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

/// Inverse of a modulo m, or -1 when gcd(a,m) != 1.
inline std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    std::int64_t t = 0, nt = 1, r = m, nr = mod_floor(a, m);
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::int64_t tmp = t - q * nt; t = nt; nt = tmp;
        tmp = r - q * nr; r = nr; nr = tmp;
    }
    if (r != 1) return -1;
    return mod_floor(t, m);
}

inline bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t p = 2; p * p <= n; ++p)
        if (n % p == 0) return n == p;
    return true;
}

inline int mobius(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("mobius: n must be positive");
    int mu = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            n /= p;
            if (n % p == 0) return 0;
            mu = -mu;
        }
    }
    if (n > 1) mu = -mu;
    return mu;
}

inline std::int64_t euler_phi(std::int64_t n) {
    std::int64_t result = n;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

inline std::vector<std::int64_t> divisors(std::int64_t n) {
    std::vector<std::int64_t> small, large;
    for (std::int64_t a = 1; a * a <= n; ++a) {
        if (n % a == 0) {
            small.push_back(a);
            if (a * a != n) large.push_back(n / a);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

inline int divisor_count(std::int64_t n) {
    int c = 0;
    for (std::int64_t a = 1; a * a <= n; ++a)
        if (n % a == 0) c += (a * a == n) ? 1 : 2;
    return c;
}

/// Smallest-prime-factor sieve; factorizations in O(log n) per query.
class SpfSieve {
public:
    explicit SpfSieve(std::size_t n) : spf_(n + 1, 0) {
        for (std::size_t i = 2; i <= n; ++i) {
            if (spf_[i] == 0) {
                for (std::size_t j = i; j <= n; j += i)
                    if (spf_[j] == 0) spf_[j] = static_cast<std::uint32_t>(i);
            }
        }
    }
    std::size_t limit() const { return spf_.size() - 1; }
    std::uint32_t spf(std::size_t n) const { return spf_[n]; }

    // (prime, exponent) pairs.
    std::vector<std::pair<std::uint32_t, int>> factor(std::size_t n) const {
        std::vector<std::pair<std::uint32_t, int>> f;
        while (n > 1) {
            std::uint32_t p = spf_[n];
            int e = 0;
            while (n % p == 0) { n /= p; ++e; }
            f.emplace_back(p, e);
        }
        return f;
    }

private:
    std::vector<std::uint32_t> spf_;
};

// ---------------------------------------------------------------------------
// Deterministic parallelism: work is split into a fixed chunk grid and
// reduced in chunk order, so results are bit-identical for any thread count.

inline int& worker_threads() {
    static int n = 1;
    return n;
}

/// Natural cubic spline on a uniform grid.
class CubicSpline {
public:
    CubicSpline() = default;
    CubicSpline(double x0, double dx, std::vector<double> y) : x0_(x0), dx_(dx), y_(std::move(y)) {
        const std::size_t n = y_.size();
        if (n < 3) throw std::invalid_argument("CubicSpline: need at least 3 points");
        // solve tridiagonal system for second derivatives (natural ends)
        std::vector<double> diag(n, 2.0), rhs(n, 0.0);
        m_.assign(n, 0.0);
        std::vector<double> c(n, 0.5);
        rhs[0] = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i)
            rhs[i] = 3.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (dx_ * dx_);
        // Thomas algorithm with unit-free 0.5 off-diagonals (uniform grid)
        std::vector<double> cp(n, 0.0), dp(n, 0.0);
        cp[0] = 0.0; dp[0] = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            double mlt = 2.0 - 0.5 * cp[i - 1];
            cp[i] = 0.5 / mlt;
            dp[i] = (rhs[i] - 0.5 * dp[i - 1]) / mlt;
        }
        m_[n - 1] = 0.0;
        for (std::size_t i = n - 2; i >= 1; --i) m_[i] = dp[i] - cp[i] * m_[i + 1];
        m_[0] = 0.0;
    }

    double min_x() const { return x0_; }
    double max_x() const { return x0_ + dx_ * (static_cast<double>(y_.size()) - 1.0); }

    double operator()(double x) const {
        const std::size_t n = y_.size();
        double u = (x - x0_) / dx_;
        if (u <= 0.0) u = 0.0;
        if (u >= static_cast<double>(n - 1)) u = static_cast<double>(n - 1) - 1e-12;
        std::size_t i = static_cast<std::size_t>(u);
        double a = u - static_cast<double>(i);
        double b = 1.0 - a;
        return b * y_[i] + a * y_[i + 1] +
               dx_ * dx_ / 6.0 * ((b * b * b - b) * m_[i] + (a * a * a - a) * m_[i + 1]);
    }

private:
    double x0_ = 0.0, dx_ = 1.0;
    std::vector<double> y_, m_;
};

template <typename T, typename ChunkFn>
T parallel_chunked_sum(std::int64_t n_items, std::int64_t chunk_size, ChunkFn&& fn) {
    if (n_items <= 0) return T{};
    std::int64_t n_chunks = (n_items + chunk_size - 1) / chunk_size;
    std::vector<T> partial(static_cast<std::size_t>(n_chunks));
    int threads = std::max(1, worker_threads());
    if (threads == 1 || n_chunks == 1) {
        for (std::int64_t c = 0; c < n_chunks; ++c)
            partial[c] = fn(c * chunk_size, std::min(n_items, (c + 1) * chunk_size));
    } else {
        std::atomic<std::int64_t> next{0};
        auto worker = [&] {
            for (;;) {
                std::int64_t c = next.fetch_add(1);
                if (c >= n_chunks) break;
                partial[c] = fn(c * chunk_size, std::min(n_items, (c + 1) * chunk_size));
            }
        };
        std::vector<std::thread> pool;
        for (int i = 0; i < threads - 1; ++i) pool.emplace_back(worker);
        worker();
        for (auto& th : pool) th.join();
    }
    KahanSum<T> acc;
    for (const T& v : partial) acc.add(v);
    return acc.value();
}

}  // namespace specsum
