#pragma once

// The monoid generated by A0 = (1 0 / 1 1) and A1 = (1 1 / 0 1), Farey sets,
// and Stern-Brocot localization of a real number.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "dioph/numerics.hpp"

namespace dioph {

// Row-major 2x2 matrix of nonnegative big integers: (a b / c d).
struct IntMat2 {
  mpz_class a{1}, b{0}, c{0}, d{1};

  static IntMat2 identity() { return {}; }
  static IntMat2 A0() { return {1, 0, 1, 1}; }
  static IntMat2 A1() { return {1, 1, 0, 1}; }

  mpz_class det() const { return a * d - b * c; }
  IntMat2 transpose() const { return {a, c, b, d}; }

  friend bool operator==(const IntMat2& x, const IntMat2& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
};

IntMat2 mat_mul(const IntMat2& x, const IntMat2& y);
// Dot product of the two matrices viewed as 4-vectors, i.e. Tr(x y^T).
mpz_class hs_product(const IntMat2& x, const IntMat2& y);

using MatrixTuple = std::vector<IntMat2>;

// All |t1|*|t2| products x*y, t1 index major.
MatrixTuple tuple_product(const MatrixTuple& t1, const MatrixTuple& t2);

// Reduced fraction num/den; 1/0 is the point at infinity.
class Fraction {
 public:
  Fraction() = default;
  // Reduces; throws DomainError for 0/0 or negative parts.
  Fraction(mpz_class num, mpz_class den);

  const mpz_class& num() const { return num_; }
  const mpz_class& den() const { return den_; }
  bool is_infinity() const { return den_ == 0; }

  std::string to_string() const;
  static Fraction parse(const std::string& text);

  friend bool operator==(const Fraction& x, const Fraction& y) { return x.num_ == y.num_ && x.den_ == y.den_; }
  // Ordering on the extended positive reals (1/0 is the largest).
  friend bool operator<(const Fraction& x, const Fraction& y) { return x.num_ * y.den_ < y.num_ * x.den_; }

 private:
  mpz_class num_{0};
  mpz_class den_{1};
};

Fraction mediant(const Fraction& x, const Fraction& y);

// A word over a k-letter alphabet; for the Farey pair letter 0 is A0 and
// letter 1 is A1. Serialized as a digit string, e.g. "0110".
struct Word {
  std::vector<std::uint8_t> letters;

  std::size_t size() const { return letters.size(); }
  std::string to_string() const;
  static Word parse(const std::string& text);
  friend bool operator==(const Word& x, const Word& y) { return x.letters == y.letters; }
};

// A_{w1} A_{w2} ... A_{wN} over the given alphabet (default (A0, A1)).
IntMat2 word_matrix(const Word& w, const MatrixTuple& alphabet = {IntMat2::A0(), IntMat2::A1()});

// 2x2 matrix of real weights (a b / c d), e.g. Knauf's (0 0 / 0 1) or the
// Diophantine (0 -1 / 0 alpha).
struct WeightMatrix {
  RealScalar a, b, c, d;

  static WeightMatrix knauf();
  static WeightMatrix fiala_kleban(const RealScalar& x);
  static WeightMatrix diophantine(const RealScalar& alpha);

  bool is_exact() const { return a.is_exact() && b.is_exact() && c.is_exact() && d.is_exact(); }
  // M * X^T for an integer matrix X.
  WeightMatrix times_transpose(const IntMat2& x) const;
};

RealScalar hs_product(const WeightMatrix& m, const IntMat2& x);

constexpr unsigned kFareyCap = 30;
constexpr std::size_t kFareyMemoryGuard = std::size_t{1} << 25;

// F_n in decreasing order: 1/0, n/1, ..., 1/n, 0/1. Throws CapExceeded for
// n > cap or when 2^n + 1 exceeds the memory guard.
std::vector<Fraction> farey_set(unsigned n, unsigned cap = kFareyCap);
// The same set in increasing order (0/1 first).
std::vector<Fraction> reversed(std::vector<Fraction> set);

// Right columns of all 2^N words of length N, in lexicographic word order
// (letter 0 before letter 1).
std::vector<Fraction> right_columns(unsigned N, unsigned cap = kFareyCap);

// The length-N word whose column-flipped interval [right col, left col]
// contains alpha > 0. Throws ZeroFormError (boundary hit) if alpha is one of
// the mediants visited, which is only possible for rational alpha.
Word localize(const RealScalar& alpha, unsigned N);

}  // namespace dioph
