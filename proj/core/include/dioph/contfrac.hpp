#pragma once

// Continued fractions from rational, quadratic-surd, rule-generated and
// certified-real sources; convergents, secondary convergents, the checkpoint
// indices N_m = a_0 + ... + a_m and the reciprocal distances d_N.

#include <gmpxx.h>

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dioph/numerics.hpp"

namespace dioph {

constexpr std::size_t kDefaultDigitCap = 1'000'000;

struct SurdPeriod {
  std::vector<mpz_class> preperiod;  // a_0 ... a_p
  std::vector<mpz_class> period;     // c_1 ... c_l
};

// What a quotient rule sees when asked for a_{m+1}.
struct RuleContext {
  std::size_t m;
  const std::vector<mpz_class>& quotients;  // a_0 .. a_m
  const mpz_class& p;                       // p_{N_m}
  const mpz_class& q;                       // q_{N_m}
  const mpz_class& p_prev;                  // p_{N_{m-1}}
  const mpz_class& q_prev;                  // q_{N_{m-1}}
  const mpz_class& N;                       // N_m
  std::size_t digit_cap;
};

using QuotientRule = std::function<mpz_class(const RuleContext&)>;

// base^exponent, throwing CapExceeded before materializing a result with more
// than digit_cap decimal digits.
mpz_class checked_pow(const mpz_class& base, const mpz_class& exponent, std::size_t digit_cap);

class CFExpansion {
 public:
  enum class Kind { rational, surd, rule, real };

  class Generator;

  CFExpansion(Kind kind, std::shared_ptr<Generator> generator, std::optional<SurdPeriod> period,
              RealScalar value);

  Kind kind() const { return kind_; }
  const mpz_class& a0() const;
  // a_i, or nullopt when a finite expansion has fewer terms. Throws
  // CapExceeded past a rule's digit cap and PrecisionExhausted when a
  // certified-real source cannot decide a floor.
  std::optional<mpz_class> quotient(std::size_t i) const;
  // Up to `count` leading quotients (fewer for finite expansions).
  std::vector<mpz_class> prefix(std::size_t count) const;
  // Leading quotients that can be produced without error, at most `count`.
  std::vector<mpz_class> available_prefix(std::size_t count) const;
  bool is_finite() const { return kind_ == Kind::rational; }
  const std::optional<SurdPeriod>& period() const { return period_; }
  // The real number the expansion represents.
  const RealScalar& value() const { return value_; }

  // "[a0;a1,...]" with `depth` quotients in total (a0 included), followed by
  // " (period: c1,...)" for surds.
  std::string to_string(std::size_t depth) const;

 private:
  Kind kind_;
  std::shared_ptr<Generator> generator_;
  std::optional<SurdPeriod> period_;
  RealScalar value_;
};

CFExpansion cf_from_rational(const mpz_class& p, const mpz_class& q);
// (P + sqrt(D)) / Q.
CFExpansion cf_from_surd(const mpz_class& P, const mpz_class& Q, const mpz_class& D);
// Quotients `seed` followed by rule(ctx) for every later index.
CFExpansion cf_from_rule(std::vector<mpz_class> seed, QuotientRule rule, std::size_t digit_cap = kDefaultDigitCap,
                         std::string name = "rule");
// First `depth` quotients are certified eagerly; later ones on demand.
CFExpansion cf_from_real(const RealScalar& alpha, std::size_t depth);

// e - 1 = [1; 1, 2, 1, 1, 4, 1, 1, 6, ...].
CFExpansion cf_e_minus_1();

struct ConvergentRow {
  std::size_t m;
  mpz_class a;
  mpz_class p;
  mpz_class q;
  mpz_class N;  // N_m
};

using ConvergentTable = std::vector<ConvergentRow>;

// Rows m = 0 .. m_max. Throws DomainError when a finite expansion is shorter.
ConvergentTable convergents(const CFExpansion& cf, std::size_t m_max);

struct SecondaryConvergent {
  mpz_class p;
  mpz_class q;
  long m;  // -1 only for N < a_0 with extend_below_a0
  mpz_class k;
};

// p_N/q_N = [a_0; a_1, ..., a_m, k] with N = N_m + k and 0 <= k < a_{m+1};
// k = 0 gives the m-th convergent. For N < a_0 this throws DomainError unless
// extend_below_a0 is set, in which case m = -1 and p_N/q_N = N/1.
SecondaryConvergent secondary_convergent(const CFExpansion& cf, const mpz_class& N, bool extend_below_a0 = false);

struct DiophantineDistance {
  mpz_class N;
  mpz_class p;
  mpz_class q;
  RealScalar d;  // 1 / |p - alpha q|
};

DiophantineDistance diophantine_distance(const RealScalar& alpha, const CFExpansion& cf, const mpz_class& N,
                                         double rel_width = 0x1p-20, bool extend_below_a0 = false);

struct DChainWitness {
  std::size_t m;
  std::vector<DiophantineDistance> chain;  // in the order of the inequality
  bool strict;
};

// Certifies d_{N_{m-1}} < d_{N_m+1} < ... < d_{N_m+a_{m+1}-1} < d_{N_m}.
DChainWitness d_chain_check(const RealScalar& alpha, const CFExpansion& cf, std::size_t m);

struct ConvergentBoundCheck {
  std::size_t m;
  mpz_class lower;  // a_{m+1} q_{N_m}
  RealScalar d;     // d_{N_m}
  mpz_class upper;  // (a_{m+1} + 2) q_{N_m}
  bool holds;
};

// a_{m+1} q_{N_m} <= d_{N_m} <= (a_{m+1} + 2) q_{N_m}, certified.
ConvergentBoundCheck check_convergent_bounds(const RealScalar& alpha, const CFExpansion& cf, std::size_t m);

}  // namespace dioph
