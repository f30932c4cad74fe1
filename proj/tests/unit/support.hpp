#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <random>

#include "dioph/numerics.hpp"

namespace test_support {

// Fixed-seed generator so every property run sees the same cases.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

 private:
  std::mt19937_64 rng_;
};

inline bool near(const dioph::Interval& x, double v, double tol) {
  return x.lo_double() - tol <= v && v <= x.hi_double() + tol;
}

inline double mid(const dioph::RealScalar& s) { return s.enclosure().mid_double(); }

inline long gcd(long a, long b) {
  while (b != 0) {
    const long t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

}  // namespace test_support
