#include "dioph/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <utility>

#include "dioph/errors.hpp"

namespace dioph {

namespace {

std::atomic<Precision> g_start_bits{64};
std::atomic<Precision> g_max_bits{Precision{1} << 20};

Precision max_prec(const Interval& a, const Interval& b) {
  return std::max(a.precision(), b.precision());
}

// min/max helpers that treat NaN (0 * inf) as zero.
void min_into(mpfr_ptr acc, mpfr_srcptr v, bool first) {
  if (mpfr_nan_p(v)) {
    if (first || mpfr_sgn(acc) > 0) mpfr_set_zero(acc, 1);
    return;
  }
  if (first || mpfr_less_p(v, acc)) mpfr_set(acc, v, MPFR_RNDD);
}

void max_into(mpfr_ptr acc, mpfr_srcptr v, bool first) {
  if (mpfr_nan_p(v)) {
    if (first || mpfr_sgn(acc) < 0) mpfr_set_zero(acc, 1);
    return;
  }
  if (first || mpfr_greater_p(v, acc)) mpfr_set(acc, v, MPFR_RNDU);
}

using BinaryMpfr = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);

// Evaluates op on the four endpoint corners and keeps the extremes.
Interval corners(const Interval& a, const Interval& b, BinaryMpfr op, Precision prec) {
  Interval out(prec);
  Float t(prec);
  const mpfr_srcptr xs[2] = {a.lo().get(), a.hi().get()};
  const mpfr_srcptr ys[2] = {b.lo().get(), b.hi().get()};
  bool first = true;
  for (auto x : xs) {
    for (auto y : ys) {
      op(t.get(), x, y, MPFR_RNDD);
      min_into(out.lo().get(), t.get(), first);
      op(t.get(), x, y, MPFR_RNDU);
      max_into(out.hi().get(), t.get(), first);
      first = false;
    }
  }
  return out;
}

class RationalSource final : public RealSource {
 public:
  explicit RationalSource(mpq_class v) : value_(std::move(v)) { value_.canonicalize(); }
  Interval enclose(Precision working) const override { return Interval::from_mpq(value_, working); }
  std::optional<mpq_class> exact() const override { return value_; }
  std::string describe() const override { return value_.get_str(); }

 private:
  mpq_class value_;
};

class SurdSource final : public RealSource {
 public:
  SurdSource(mpz_class P, mpz_class Q, mpz_class D) : P_(std::move(P)), Q_(std::move(Q)), D_(std::move(D)) {}

  // sqrt(D) lies in [s, s+1] / 2^k with s = isqrt(D * 4^k); the bracket is
  // mapped through (P + .) / Q exactly and rounded outward.
  Interval enclose(Precision working) const override {
    const unsigned long k = static_cast<unsigned long>(working) + mpz_sizeinbase(Q_.get_mpz_t(), 2) + 4;
    mpz_class scaled = D_ << (2 * k);
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), scaled.get_mpz_t());
    mpz_class shift = mpz_class(1) << k;
    mpq_class a(P_ * shift + s, Q_ * shift);
    mpq_class b(P_ * shift + s + 1, Q_ * shift);
    a.canonicalize();
    b.canonicalize();
    if (b < a) std::swap(a, b);
    Interval out(working);
    mpfr_set_q(out.lo().get(), a.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(out.hi().get(), b.get_mpq_t(), MPFR_RNDU);
    return out;
  }
  std::string describe() const override {
    return "(" + P_.get_str() + "+sqrt(" + D_.get_str() + "))/" + Q_.get_str();
  }

 private:
  mpz_class P_, Q_, D_;
};

class FunctionSource final : public RealSource {
 public:
  FunctionSource(std::function<Interval(Precision)> fn, std::string description)
      : fn_(std::move(fn)), description_(std::move(description)) {}
  Interval enclose(Precision working) const override { return fn_(working); }
  std::string describe() const override { return description_; }

 private:
  std::function<Interval(Precision)> fn_;
  std::string description_;
};

class CachedSource final : public RealSource {
 public:
  CachedSource(std::function<Interval(Precision)> fn, std::string description, Precision bits, Interval first)
      : fn_(std::move(fn)), description_(std::move(description)), bits_(bits), best_(std::move(first)) {}

  Interval enclose(Precision working) const override {
    std::lock_guard<std::mutex> lock(mu_);
    if (working > bits_) {
      best_ = fn_(working).intersect(best_);
      bits_ = working;
    }
    return best_;
  }
  std::string describe() const override { return description_; }

 private:
  std::function<Interval(Precision)> fn_;
  std::string description_;
  mutable std::mutex mu_;
  mutable Precision bits_;
  mutable Interval best_;
};

class LiteralSource final : public RealSource {
 public:
  LiteralSource(mpq_class center, unsigned bits, std::string text)
      : center_(std::move(center)), bits_(bits), text_(std::move(text)) {}
  Interval enclose(Precision working) const override {
    Interval c = Interval::from_mpq(center_, working);
    Float err(working);
    mpfr_set_ui_2exp(err.get(), 1, -static_cast<long>(bits_), MPFR_RNDU);
    mpfr_sub(c.lo().get(), c.lo().get(), err.get(), MPFR_RNDD);
    mpfr_add(c.hi().get(), c.hi().get(), err.get(), MPFR_RNDU);
    return c;
  }
  std::string describe() const override { return text_ + "@" + std::to_string(bits_); }

 private:
  mpq_class center_;
  unsigned bits_;
  std::string text_;
};

long magnitude_bits(const Interval& x) {
  long mag = 0;
  for (const Float* f : {&x.lo(), &x.hi()}) {
    if (mpfr_regular_p(f->get())) mag = std::max(mag, static_cast<long>(mpfr_get_exp(f->get())));
  }
  return mag;
}

}  // namespace

mpq_class parse_decimal(const std::string& text) {
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  bool negative = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (i == 0 && (c == '-' || c == '+')) {
      negative = c == '-';
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else if (c >= '0' && c <= '9') {
      digits.push_back(c);
      if (seen_point) ++frac_digits;
    } else {
      throw ParseError("invalid decimal literal: " + text);
    }
  }
  if (digits.empty()) throw ParseError("invalid decimal literal: " + text);
  mpz_class num(digits, 10);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(frac_digits));
  mpq_class v(negative ? mpz_class(-num) : num, den);
  v.canonicalize();
  return v;
}

namespace {

template <class Op>
RealScalar combine(const RealScalar& a, const RealScalar& b, Op op, const char* symbol) {
  auto sa = a.source();
  auto sb = b.source();
  auto source = std::make_shared<FunctionSource>(
      [sa, sb, op](Precision w) { return op(sa->enclose(w + 8), sb->enclose(w + 8)); },
      "(" + sa->describe() + symbol + sb->describe() + ")");
  return RealScalar(source, op(a.enclosure(), b.enclosure()));
}

}  // namespace

PrecisionPolicy precision_policy() { return {g_start_bits.load(), g_max_bits.load()}; }

void set_precision_policy(const PrecisionPolicy& policy) {
  if (policy.start_bits < MPFR_PREC_MIN || policy.max_bits < policy.start_bits) {
    throw DomainError("invalid precision policy");
  }
  g_start_bits = policy.start_bits;
  g_max_bits = policy.max_bits;
}

// ---------------------------------------------------------------- Float

Float::Float(Precision prec) {
  mpfr_init2(value_, prec);
  mpfr_set_zero(value_, 1);
}

Float::Float(const Float& other) {
  mpfr_init2(value_, other.precision());
  mpfr_set(value_, other.value_, MPFR_RNDN);
}

Float::Float(Float&& other) noexcept {
  mpfr_init2(value_, other.precision());
  mpfr_swap(value_, other.value_);
}

Float& Float::operator=(const Float& other) {
  if (this != &other) {
    mpfr_set_prec(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
  }
  return *this;
}

Float& Float::operator=(Float&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Float::~Float() { mpfr_clear(value_); }

std::string Float::to_string(int digits, mpfr_rnd_t rnd) const {
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) > 0 ? "inf" : "-inf";
  if (mpfr_nan_p(value_)) return "nan";
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*R*e", digits - 1, rnd, value_);
  std::string out(buf);
  mpfr_free_str(buf);
  return out;
}

// ---------------------------------------------------------------- Interval

Interval::Interval(Precision prec) : lo_(prec), hi_(prec) {}

Interval::Interval(Float lo, Float hi) : lo_(std::move(lo)), hi_(std::move(hi)) {}

Interval Interval::from_long(long v, Precision prec) {
  Interval out(prec);
  mpfr_set_si(out.lo_.get(), v, MPFR_RNDD);
  mpfr_set_si(out.hi_.get(), v, MPFR_RNDU);
  return out;
}

Interval Interval::from_mpz(const mpz_class& v, Precision prec) {
  Interval out(prec);
  mpfr_set_z(out.lo_.get(), v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(out.hi_.get(), v.get_mpz_t(), MPFR_RNDU);
  return out;
}

Interval Interval::from_mpq(const mpq_class& v, Precision prec) {
  Interval out(prec);
  mpfr_set_q(out.lo_.get(), v.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(out.hi_.get(), v.get_mpq_t(), MPFR_RNDU);
  return out;
}

Interval Interval::from_double(double v, Precision prec) {
  Interval out(prec);
  mpfr_set_d(out.lo_.get(), v, MPFR_RNDD);
  mpfr_set_d(out.hi_.get(), v, MPFR_RNDU);
  return out;
}

Interval Interval::entire(Precision prec) {
  Interval out(prec);
  mpfr_set_inf(out.lo_.get(), -1);
  mpfr_set_inf(out.hi_.get(), 1);
  return out;
}

bool Interval::contains(const Interval& other) const {
  return mpfr_lessequal_p(lo_.get(), other.lo_.get()) && mpfr_greaterequal_p(hi_.get(), other.hi_.get());
}

bool Interval::contains(const mpq_class& v) const {
  return mpfr_cmp_q(lo_.get(), v.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), v.get_mpq_t()) >= 0;
}

bool Interval::intersects(const Interval& other) const {
  return mpfr_lessequal_p(lo_.get(), other.hi_.get()) && mpfr_lessequal_p(other.lo_.get(), hi_.get());
}

Float Interval::width() const {
  Float w(precision());
  mpfr_sub(w.get(), hi_.get(), lo_.get(), MPFR_RNDU);
  return w;
}

double Interval::relative_width() const {
  if (contains_zero() || !is_finite()) return std::numeric_limits<double>::infinity();
  Float w = width();
  Float m(precision());
  if (mpfr_sgn(lo_.get()) > 0) {
    mpfr_set(m.get(), lo_.get(), MPFR_RNDD);
  } else {
    mpfr_neg(m.get(), hi_.get(), MPFR_RNDD);
  }
  Float r(53);
  mpfr_div(r.get(), w.get(), m.get(), MPFR_RNDU);
  return r.to_double(MPFR_RNDU);
}

double Interval::mid_double() const {
  Float m(precision() + 1);
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m.to_double();
}

Interval Interval::intersect(const Interval& other) const {
  Interval out(max_prec(*this, other));
  mpfr_max(out.lo_.get(), lo_.get(), other.lo_.get(), MPFR_RNDD);
  mpfr_min(out.hi_.get(), hi_.get(), other.hi_.get(), MPFR_RNDU);
  if (mpfr_greater_p(out.lo_.get(), out.hi_.get())) {
    throw DomainError("disjoint enclosures of the same value");
  }
  return out;
}

Interval Interval::hull(const Interval& other) const {
  Interval out(max_prec(*this, other));
  mpfr_min(out.lo_.get(), lo_.get(), other.lo_.get(), MPFR_RNDD);
  mpfr_max(out.hi_.get(), hi_.get(), other.hi_.get(), MPFR_RNDU);
  return out;
}

Interval operator+(const Interval& a, const Interval& b) {
  Interval out(max_prec(a, b));
  mpfr_add(out.lo_.get(), a.lo_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_add(out.hi_.get(), a.hi_.get(), b.hi_.get(), MPFR_RNDU);
  return out;
}

Interval& Interval::operator+=(const Interval& b) {
  mpfr_add(lo_.get(), lo_.get(), b.lo_.get(), MPFR_RNDD);
  mpfr_add(hi_.get(), hi_.get(), b.hi_.get(), MPFR_RNDU);
  return *this;
}

Interval operator-(const Interval& a, const Interval& b) {
  Interval out(max_prec(a, b));
  mpfr_sub(out.lo_.get(), a.lo_.get(), b.hi_.get(), MPFR_RNDD);
  mpfr_sub(out.hi_.get(), a.hi_.get(), b.lo_.get(), MPFR_RNDU);
  return out;
}

Interval operator-(const Interval& a) {
  Interval out(a.precision());
  mpfr_neg(out.lo_.get(), a.hi_.get(), MPFR_RNDD);
  mpfr_neg(out.hi_.get(), a.lo_.get(), MPFR_RNDU);
  return out;
}

Interval operator*(const Interval& a, const Interval& b) { return corners(a, b, mpfr_mul, max_prec(a, b)); }

Interval operator/(const Interval& a, const Interval& b) {
  if (b.contains_zero()) return Interval::entire(max_prec(a, b));
  return corners(a, b, mpfr_div, max_prec(a, b));
}

Interval abs(const Interval& x) {
  if (mpfr_sgn(x.lo().get()) >= 0) return x;
  if (mpfr_sgn(x.hi().get()) <= 0) return -x;
  Interval out(x.precision());
  mpfr_set_zero(out.lo().get(), 1);
  Float neg_lo(x.precision());
  mpfr_neg(neg_lo.get(), x.lo().get(), MPFR_RNDU);
  mpfr_max(out.hi().get(), neg_lo.get(), x.hi().get(), MPFR_RNDU);
  return out;
}

Interval mul(const Interval& x, const mpz_class& k) {
  Interval out(x.precision());
  if (sgn(k) >= 0) {
    mpfr_mul_z(out.lo().get(), x.lo().get(), k.get_mpz_t(), MPFR_RNDD);
    mpfr_mul_z(out.hi().get(), x.hi().get(), k.get_mpz_t(), MPFR_RNDU);
  } else {
    mpfr_mul_z(out.lo().get(), x.hi().get(), k.get_mpz_t(), MPFR_RNDD);
    mpfr_mul_z(out.hi().get(), x.lo().get(), k.get_mpz_t(), MPFR_RNDU);
  }
  return out;
}

Interval sqrt(const Interval& x) {
  if (mpfr_sgn(x.hi().get()) < 0) throw DomainError("sqrt of a negative interval");
  Interval out(x.precision());
  if (mpfr_sgn(x.lo().get()) <= 0) {
    mpfr_set_zero(out.lo().get(), 1);
  } else {
    mpfr_sqrt(out.lo().get(), x.lo().get(), MPFR_RNDD);
  }
  mpfr_sqrt(out.hi().get(), x.hi().get(), MPFR_RNDU);
  return out;
}

Interval log(const Interval& x) {
  if (mpfr_sgn(x.hi().get()) <= 0) throw DomainError("log of a nonpositive interval");
  Interval out(x.precision());
  if (mpfr_sgn(x.lo().get()) <= 0) {
    mpfr_set_inf(out.lo().get(), -1);
  } else {
    mpfr_log(out.lo().get(), x.lo().get(), MPFR_RNDD);
  }
  mpfr_log(out.hi().get(), x.hi().get(), MPFR_RNDU);
  return out;
}

Interval exp(const Interval& x) {
  Interval out(x.precision());
  mpfr_exp(out.lo().get(), x.lo().get(), MPFR_RNDD);
  mpfr_exp(out.hi().get(), x.hi().get(), MPFR_RNDU);
  return out;
}

Interval pow(const Interval& base, const Interval& exponent) {
  if (!base.positive()) throw DomainError("pow requires a positive base");
  return corners(base, exponent, mpfr_pow, max_prec(base, exponent));
}

Interval inv_pow(const Interval& x, const Interval& beta) {
  if (x.contains_zero()) throw ZeroFormError("inv_pow of an interval containing zero");
  return pow(abs(x), -beta);
}

Precision working_precision(unsigned bits, long magnitude) {
  return static_cast<Precision>(bits) + std::max(0L, magnitude) + 8;
}

// ---------------------------------------------------------------- RealScalar

RealScalar::RealScalar() : RealScalar(rational(0)) {}

RealScalar::RealScalar(std::shared_ptr<const RealSource> source, Interval enclosure)
    : source_(std::move(source)), enclosure_(std::move(enclosure)) {}

RealScalar RealScalar::rational(const mpq_class& v) {
  auto src = std::make_shared<RationalSource>(v);
  Interval enc = src->enclose(precision_policy().start_bits);
  return RealScalar(std::move(src), std::move(enc));
}

RealScalar RealScalar::surd(const mpz_class& P, const mpz_class& Q, const mpz_class& D) {
  if (Q == 0) throw DomainError("surd denominator is zero");
  if (D <= 0 || mpz_perfect_square_p(D.get_mpz_t())) {
    throw DomainError("surd radicand must be a positive non-square");
  }
  return from_source(std::make_shared<SurdSource>(P, Q, D));
}

RealScalar RealScalar::from_source(std::shared_ptr<const RealSource> source) {
  Interval enc = source->enclose(precision_policy().start_bits);
  return RealScalar(std::move(source), std::move(enc));
}

RealScalar RealScalar::from_function(std::function<Interval(Precision)> fn, std::string description) {
  return from_source(std::make_shared<FunctionSource>(std::move(fn), std::move(description)));
}

RealScalar RealScalar::from_cached_function(std::function<Interval(Precision)> fn, std::string description,
                                            Precision first) {
  Interval enc = fn(first);
  auto src = std::make_shared<CachedSource>(std::move(fn), std::move(description), first, enc);
  return RealScalar(std::move(src), std::move(enc));
}

RealScalar RealScalar::literal(const std::string& decimal, unsigned bits) {
  return from_source(std::make_shared<LiteralSource>(parse_decimal(decimal), bits, decimal.substr(0, 24)));
}

Interval RealScalar::at(Precision working) const {
  Interval fresh = source_->enclose(working);
  if (is_exact()) return fresh;
  return fresh.intersect(enclosure_);
}

double RealScalar::width() const {
  if (is_exact()) return 0.0;
  return enclosure_.width().to_double(MPFR_RNDU);
}

RealScalar operator+(const RealScalar& a, const RealScalar& b) {
  if (auto x = a.exact_value(), y = b.exact_value(); x && y) return RealScalar::rational(*x + *y);
  return combine(a, b, [](const Interval& x, const Interval& y) { return x + y; }, "+");
}

RealScalar operator-(const RealScalar& a, const RealScalar& b) {
  if (auto x = a.exact_value(), y = b.exact_value(); x && y) return RealScalar::rational(*x - *y);
  return combine(a, b, [](const Interval& x, const Interval& y) { return x - y; }, "-");
}

RealScalar operator*(const RealScalar& a, const RealScalar& b) {
  if (auto x = a.exact_value(), y = b.exact_value(); x && y) return RealScalar::rational(*x * *y);
  return combine(a, b, [](const Interval& x, const Interval& y) { return x * y; }, "*");
}

RealScalar operator/(const RealScalar& a, const RealScalar& b) {
  if (auto x = a.exact_value(), y = b.exact_value(); x && y) {
    if (*y == 0) throw ZeroFormError("division by exact zero");
    return RealScalar::rational(*x / *y);
  }
  return combine(a, b, [](const Interval& x, const Interval& y) { return x / y; }, "/");
}

RealScalar operator-(const RealScalar& a) { return RealScalar::integer(0) - a; }

RealScalar operator*(const RealScalar& a, const mpz_class& k) {
  return a * RealScalar::rational(mpq_class(k));
}

RealScalar log(const RealScalar& x) {
  if (auto v = x.exact_value(); v && *v == 1) return RealScalar::integer(0);
  return RealScalar::from_function([x](Precision w) { return log(x.at(w + 8)); }, "log(" + x.describe() + ")");
}

RealScalar exp(const RealScalar& x) {
  if (auto v = x.exact_value(); v && *v == 0) return RealScalar::integer(1);
  return RealScalar::from_function([x](Precision w) { return exp(x.at(w + 8)); }, "exp(" + x.describe() + ")");
}

RealScalar pow(const RealScalar& base, const RealScalar& exponent) {
  return RealScalar::from_function([base, exponent](Precision w) { return pow(base.at(w + 8), exponent.at(w + 8)); },
                                   "(" + base.describe() + ")^(" + exponent.describe() + ")");
}

RealScalar refine(const RealScalar& s, unsigned bits) {
  if (bits < 1) throw DomainError("refine requires bits >= 1");
  if (s.is_exact()) return s;
  const PrecisionPolicy policy = precision_policy();
  Float target(64);
  mpfr_set_ui_2exp(target.get(), 1, -static_cast<long>(bits), MPFR_RNDN);
  Precision w = std::min(policy.max_bits,
                         std::max(policy.start_bits, working_precision(bits, magnitude_bits(s.enclosure()))));
  for (;;) {
    Interval enc = s.at(w);
    if (mpfr_lessequal_p(enc.width().get(), target.get())) return RealScalar(s.source(), std::move(enc));
    if (w >= policy.max_bits) {
      throw PrecisionExhausted("cannot refine " + s.describe() + " to " + std::to_string(bits) + " bits");
    }
    w = std::min(policy.max_bits, 2 * w);
  }
}

RealScalar eval_linear_form(const RealScalar& alpha, const mpz_class& p, const mpz_class& q, double rel_width) {
  if (p == 0 && q == 0) throw DomainError("linear form at (0,0)");
  if (q == 0) return RealScalar::rational(mpq_class(abs(p)));
  if (auto a = alpha.exact_value()) {
    mpq_class v = mpq_class(p) - *a * mpq_class(q);
    if (v == 0) throw ZeroFormError("p - alpha q vanishes at p/q = " + p.get_str() + "/" + q.get_str());
    return RealScalar::rational(abs(v));
  }
  const long qbits = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2));
  const long pbits = static_cast<long>(mpz_sizeinbase(p.get_mpz_t(), 2));
  const long guard = std::max(qbits, pbits) + 8;
  auto evaluate = [alpha, p, q, guard](Precision w) {
    const Precision wide = std::min<Precision>(precision_policy().max_bits, w + guard);
    Interval a = alpha.at(wide);
    return abs(Interval::from_mpz(p, wide) - mul(a, q));
  };
  const PrecisionPolicy policy = precision_policy();
  for (Precision w = policy.start_bits;; w = std::min(policy.max_bits, 2 * w)) {
    Interval x = evaluate(w);
    if (!x.contains_zero() && x.relative_width() <= rel_width) {
      auto src = std::make_shared<FunctionSource>(
          evaluate, "|" + p.get_str() + " - alpha*" + q.get_str() + "|");
      return RealScalar(std::move(src), std::move(x));
    }
    if (w + guard >= policy.max_bits) {
      throw PrecisionExhausted("cannot separate p - alpha q from zero at p/q = " + p.get_str() + "/" + q.get_str());
    }
  }
}

int certified_compare(const RealScalar& a, const RealScalar& b) {
  auto x = a.exact_value();
  auto y = b.exact_value();
  if (x && y) return *x < *y ? -1 : (*x > *y ? 1 : 0);
  const PrecisionPolicy policy = precision_policy();
  for (Precision w = policy.start_bits;; w = std::min(policy.max_bits, 2 * w)) {
    Interval ia = a.at(w);
    Interval ib = b.at(w);
    if (ia.certainly_less(ib)) return -1;
    if (ia.certainly_greater(ib)) return 1;
    if (w >= policy.max_bits) throw PrecisionExhausted("comparison undecided at the precision cap");
  }
}

int certified_sign_against(const RealScalar& x, const mpq_class& r) {
  if (auto v = x.exact_value()) return *v < r ? -1 : (*v > r ? 1 : 0);
  const PrecisionPolicy policy = precision_policy();
  for (Precision w = policy.start_bits;; w = std::min(policy.max_bits, 2 * w)) {
    Interval i = x.at(w);
    if (mpfr_cmp_q(i.hi().get(), r.get_mpq_t()) < 0) return -1;
    if (mpfr_cmp_q(i.lo().get(), r.get_mpq_t()) > 0) return 1;
    if (w >= policy.max_bits) throw PrecisionExhausted("sign against " + r.get_str() + " undecided");
  }
}

std::string to_string(const mpz_class& v) { return v.get_str(); }

}  // namespace dioph
