#pragma once
//
// Project : hgraded
// Module  : common.hpp
// Purpose : error types, deterministic RNG, small numeric helpers
//

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace hgraded {

// Error classes map onto the CLI exit codes: config_error -> 2, numeric_error -> 3.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Deterministic 64-bit generator (splitmix64). Distribution mapping is done by
// hand so streams are identical across compilers and standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0x9e3779b97f4a7c15ULL) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // uniform in [lo,hi)
    double next_real(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // uniform integer in [0,n)
    std::uint64_t next_index(std::uint64_t n) { return next_u64() % n; }

  private:
    std::uint64_t state_;
};

// Compensated accumulation; used where sums must hit 1e-12 style tolerances.
class KahanSum {
  public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

inline std::uint64_t pow2_ceil(double x) {
    if (!(x > 0.0)) return 1;
    std::uint64_t p = 1;
    while (double(p) < x) p <<= 1;
    return p;
}

inline bool is_pow2(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

// n! as double, exact up to 22!, < 1 ulp relative error afterwards.
inline double factorial(int n) {
    static const int kMax = 170;
    static double table[kMax + 1];
    static bool init = false;
    if (!init) {
        table[0] = 1.0;
        for (int i = 1; i <= kMax; ++i) table[i] = table[i - 1] * double(i);
        init = true;
    }
    if (n < 0 || n > kMax) throw numeric_error("factorial: argument out of range");
    return table[n];
}

inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    k = (k < n - k) ? k : n - k;
    for (int i = 0; i < k; ++i) r = r * double(n - i) / double(i + 1);
    return r;
}

inline int binom_int(int n, int k) { return int(std::llround(binom(n, k))); }

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace hgraded
