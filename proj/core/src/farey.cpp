#include "dioph/farey.hpp"

#include <algorithm>
#include <utility>

#include "dioph/errors.hpp"

namespace dioph {

IntMat2 mat_mul(const IntMat2& x, const IntMat2& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

mpz_class hs_product(const IntMat2& x, const IntMat2& y) { return x.a * y.a + x.b * y.b + x.c * y.c + x.d * y.d; }

MatrixTuple tuple_product(const MatrixTuple& t1, const MatrixTuple& t2) {
  MatrixTuple out;
  out.reserve(t1.size() * t2.size());
  for (const auto& x : t1) {
    for (const auto& y : t2) out.push_back(mat_mul(x, y));
  }
  return out;
}

// ---------------------------------------------------------------- Fraction

Fraction::Fraction(mpz_class num, mpz_class den) : num_(std::move(num)), den_(std::move(den)) {
  if (num_ < 0 || den_ < 0) throw DomainError("Farey fractions are nonnegative");
  if (num_ == 0 && den_ == 0) throw DomainError("0/0 is not a fraction");
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), num_.get_mpz_t(), den_.get_mpz_t());
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

std::string Fraction::to_string() const { return num_.get_str() + "/" + den_.get_str(); }

Fraction Fraction::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Fraction(mpz_class(text, 10), 1);
    return Fraction(mpz_class(text.substr(0, slash), 10), mpz_class(text.substr(slash + 1), 10));
  } catch (const std::invalid_argument&) {
    throw ParseError("invalid fraction: " + text);
  }
}

Fraction mediant(const Fraction& x, const Fraction& y) { return Fraction(x.num() + y.num(), x.den() + y.den()); }

// ---------------------------------------------------------------- Word

std::string Word::to_string() const {
  std::string s;
  s.reserve(letters.size());
  for (auto l : letters) s.push_back(static_cast<char>('0' + l));
  return s;
}

Word Word::parse(const std::string& text) {
  Word w;
  for (char c : text) {
    if (c < '0' || c > '9') throw ParseError("invalid word: " + text);
    w.letters.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return w;
}

IntMat2 word_matrix(const Word& w, const MatrixTuple& alphabet) {
  IntMat2 m;
  for (auto l : w.letters) {
    if (l >= alphabet.size()) throw DomainError("word letter outside the alphabet");
    m = mat_mul(m, alphabet[l]);
  }
  return m;
}

// ---------------------------------------------------------------- WeightMatrix

WeightMatrix WeightMatrix::knauf() {
  return {RealScalar::integer(0), RealScalar::integer(0), RealScalar::integer(0), RealScalar::integer(1)};
}

WeightMatrix WeightMatrix::fiala_kleban(const RealScalar& x) {
  return {RealScalar::integer(0), RealScalar::integer(0), x, RealScalar::integer(1)};
}

WeightMatrix WeightMatrix::diophantine(const RealScalar& alpha) {
  return {RealScalar::integer(0), RealScalar::integer(-1), RealScalar::integer(0), alpha};
}

WeightMatrix WeightMatrix::times_transpose(const IntMat2& x) const {
  return {a * x.a + b * x.b, a * x.c + b * x.d, c * x.a + d * x.b, c * x.c + d * x.d};
}

RealScalar hs_product(const WeightMatrix& m, const IntMat2& x) { return m.a * x.a + m.b * x.b + m.c * x.c + m.d * x.d; }

// ---------------------------------------------------------------- Farey sets

namespace {

void check_cap(unsigned n, unsigned cap) {
  if (n > cap) throw CapExceeded("Farey level " + std::to_string(n) + " exceeds cap " + std::to_string(cap));
  if (n >= 63 || (std::size_t{1} << n) + 1 > kFareyMemoryGuard) {
    throw CapExceeded("Farey level " + std::to_string(n) + " exceeds the materialization guard");
  }
}

void collect_right_columns(const IntMat2& m, unsigned remaining, std::vector<Fraction>& out) {
  if (remaining == 0) {
    out.emplace_back(m.b, m.d);
    return;
  }
  collect_right_columns(mat_mul(m, IntMat2::A0()), remaining - 1, out);
  collect_right_columns(mat_mul(m, IntMat2::A1()), remaining - 1, out);
}

}  // namespace

std::vector<Fraction> farey_set(unsigned n, unsigned cap) {
  check_cap(n, cap);
  std::vector<Fraction> cur{Fraction(1, 0), Fraction(0, 1)};
  for (unsigned level = 0; level < n; ++level) {
    std::vector<Fraction> next;
    next.reserve(2 * cur.size() - 1);
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      next.push_back(cur[i]);
      next.push_back(mediant(cur[i], cur[i + 1]));
    }
    next.push_back(cur.back());
    cur = std::move(next);
  }
  return cur;
}

std::vector<Fraction> reversed(std::vector<Fraction> set) {
  std::reverse(set.begin(), set.end());
  return set;
}

std::vector<Fraction> right_columns(unsigned N, unsigned cap) {
  check_cap(N, cap);
  std::vector<Fraction> out;
  out.reserve(std::size_t{1} << N);
  collect_right_columns(IntMat2::identity(), N, out);
  return out;
}

Word localize(const RealScalar& alpha, unsigned N) {
  if (certified_sign_against(alpha, 0) <= 0) throw DomainError("localize requires alpha > 0");
  Word w;
  IntMat2 m;
  for (unsigned step = 0; step < N; ++step) {
    const mpq_class mid(m.a + m.b, m.c + m.d);
    const int s = certified_sign_against(alpha, mid);
    if (s == 0) throw ZeroFormError("boundary hit: alpha equals the Farey point " + mid.get_str());
    const std::uint8_t letter = s < 0 ? 0 : 1;
    w.letters.push_back(letter);
    m = mat_mul(m, letter == 0 ? IntMat2::A0() : IntMat2::A1());
  }
  return w;
}

}  // namespace dioph
