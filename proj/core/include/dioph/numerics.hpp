#pragma once

// Certified real arithmetic: MPFR-backed intervals with directed rounding and
// refinable real scalars that can re-emit their value at any precision.

#include <gmpxx.h>
#include <mpfr.h>

#include <functional>
#include <memory>
#include <optional>
#include <string>

namespace dioph {

using Precision = mpfr_prec_t;

// Precision escalation policy shared by every refinement loop.
struct PrecisionPolicy {
  Precision start_bits = 64;
  Precision max_bits = Precision{1} << 20;
};

PrecisionPolicy precision_policy();
void set_precision_policy(const PrecisionPolicy& policy);

// Owning wrapper around an mpfr_t.
class Float {
 public:
  explicit Float(Precision prec = 64);
  Float(const Float& other);
  Float(Float&& other) noexcept;
  Float& operator=(const Float& other);
  Float& operator=(Float&& other) noexcept;
  ~Float();

  mpfr_ptr get() { return value_; }
  mpfr_srcptr get() const { return value_; }
  Precision precision() const { return mpfr_get_prec(value_); }

  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(value_, rnd); }
  // Scientific notation with `digits` significant digits, rounded in `rnd`.
  std::string to_string(int digits = 17, mpfr_rnd_t rnd = MPFR_RNDN) const;

 private:
  mpfr_t value_;
};

// Closed interval [lo, hi] with MPFR endpoints. Every operation rounds the
// lower endpoint toward -inf and the upper toward +inf, so the exact result
// of the real operation on any points of the operands lies inside.
class Interval {
 public:
  explicit Interval(Precision prec = 64);
  Interval(Float lo, Float hi);

  static Interval from_long(long v, Precision prec);
  static Interval from_mpz(const mpz_class& v, Precision prec);
  static Interval from_mpq(const mpq_class& v, Precision prec);
  static Interval from_double(double v, Precision prec);
  // [-inf, +inf]
  static Interval entire(Precision prec);

  const Float& lo() const { return lo_; }
  const Float& hi() const { return hi_; }
  Float& lo() { return lo_; }
  Float& hi() { return hi_; }
  Precision precision() const { return lo_.precision(); }

  bool is_point() const { return mpfr_equal_p(lo_.get(), hi_.get()) != 0; }
  bool is_finite() const { return mpfr_number_p(lo_.get()) && mpfr_number_p(hi_.get()); }
  bool contains_zero() const { return mpfr_sgn(lo_.get()) <= 0 && mpfr_sgn(hi_.get()) >= 0; }
  bool contains(const Interval& other) const;
  bool contains(const mpq_class& v) const;
  bool intersects(const Interval& other) const;
  bool positive() const { return mpfr_sgn(lo_.get()) > 0; }
  bool negative() const { return mpfr_sgn(hi_.get()) < 0; }
  // Certified comparisons: true only when every point of *this is strictly
  // below / above every point of `other`.
  bool certainly_less(const Interval& other) const { return mpfr_less_p(hi_.get(), other.lo_.get()) != 0; }
  bool certainly_greater(const Interval& other) const { return other.certainly_less(*this); }

  // Upper bound of hi - lo.
  Float width() const;
  // Upper bound of width / min|x|; +inf when the interval contains zero.
  double relative_width() const;
  double lo_double() const { return lo_.to_double(MPFR_RNDD); }
  double hi_double() const { return hi_.to_double(MPFR_RNDU); }
  double mid_double() const;

  Interval intersect(const Interval& other) const;
  Interval hull(const Interval& other) const;

  friend Interval operator+(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a, const Interval& b);
  friend Interval operator*(const Interval& a, const Interval& b);
  // Division by an interval containing zero yields [-inf, +inf].
  friend Interval operator/(const Interval& a, const Interval& b);
  friend Interval operator-(const Interval& a);

  Interval& operator+=(const Interval& b);

 private:
  Float lo_;
  Float hi_;
};

Interval abs(const Interval& x);
Interval mul(const Interval& x, const mpz_class& k);
Interval sqrt(const Interval& x);
Interval log(const Interval& x);
Interval exp(const Interval& x);
// base^exponent for base > 0; throws DomainError otherwise.
Interval pow(const Interval& base, const Interval& exponent);
// |x|^(-beta), x must not contain zero.
Interval inv_pow(const Interval& x, const Interval& beta);
// Precision needed so that an enclosure of a value of magnitude < 2^mag
// carries `bits` bits below the binary point.
Precision working_precision(unsigned bits, long magnitude_bits);

// Produces enclosures of one fixed real number at any requested working
// precision. Implementations are immutable and thread-safe.
class RealSource {
 public:
  virtual ~RealSource() = default;
  // Enclosure whose width is roughly |value| * 2^-working (or 2^-working
  // when the value is tiny); never widens with larger `working`.
  virtual Interval enclose(Precision working) const = 0;
  // Exact rational value, when the source is rational.
  virtual std::optional<mpq_class> exact() const { return std::nullopt; }
  virtual std::string describe() const = 0;
};

class RealScalar {
 public:
  // Zero.
  RealScalar();
  RealScalar(std::shared_ptr<const RealSource> source, Interval enclosure);

  static RealScalar rational(const mpq_class& v);
  static RealScalar integer(long v) { return rational(mpq_class(v)); }
  // (P + sqrt(D)) / Q, D > 0 not a perfect square.
  static RealScalar surd(const mpz_class& P, const mpz_class& Q, const mpz_class& D);
  static RealScalar from_source(std::shared_ptr<const RealSource> source);
  static RealScalar from_function(std::function<Interval(Precision)> fn, std::string description);
  // For expensive evaluations: the tightest enclosure computed so far is kept
  // and only requests above the best precision seen trigger a recomputation.
  static RealScalar from_cached_function(std::function<Interval(Precision)> fn, std::string description,
                                         Precision first);
  // A decimal literal d that is known to be within 2^-bits of the value.
  static RealScalar literal(const std::string& decimal, unsigned bits);

  const Interval& enclosure() const { return enclosure_; }
  const std::shared_ptr<const RealSource>& source() const { return source_; }
  std::optional<mpq_class> exact_value() const { return source_->exact(); }
  bool is_exact() const { return exact_value().has_value(); }
  std::string describe() const { return source_->describe(); }

  // Enclosure at a given working precision, intersected with the current one.
  Interval at(Precision working) const;
  // Width of the current enclosure as a double (0 for exact values).
  double width() const;

  friend RealScalar operator+(const RealScalar& a, const RealScalar& b);
  friend RealScalar operator-(const RealScalar& a, const RealScalar& b);
  friend RealScalar operator*(const RealScalar& a, const RealScalar& b);
  friend RealScalar operator/(const RealScalar& a, const RealScalar& b);
  friend RealScalar operator-(const RealScalar& a);
  friend RealScalar operator*(const RealScalar& a, const mpz_class& k);

 private:
  std::shared_ptr<const RealSource> source_;
  Interval enclosure_;
};

RealScalar log(const RealScalar& x);
RealScalar exp(const RealScalar& x);
RealScalar pow(const RealScalar& base, const RealScalar& exponent);

// New scalar whose enclosure has width <= 2^-bits (exact values are returned
// unchanged). Throws PrecisionExhausted past the policy cap.
RealScalar refine(const RealScalar& s, unsigned bits);

// Enclosure of |p - alpha q| with relative width <= rel_width. Throws
// ZeroFormError when alpha is exactly p/q.
RealScalar eval_linear_form(const RealScalar& alpha, const mpz_class& p, const mpz_class& q,
                            double rel_width = 0x1p-20);

// Refines two scalars until their enclosures are disjoint; returns -1 or 1.
// Throws PrecisionExhausted if they cannot be separated (e.g. equal values).
int certified_compare(const RealScalar& a, const RealScalar& b);

// Sign of x - r for rational r, refining x as needed; 0 only when x is exact.
int certified_sign_against(const RealScalar& x, const mpq_class& r);

std::string to_string(const mpz_class& v);

// Exact value of a decimal literal such as "-2.125"; throws ParseError.
mpq_class parse_decimal(const std::string& text);

}  // namespace dioph
