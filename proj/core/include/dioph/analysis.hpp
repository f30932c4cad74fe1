#pragma once

// Constants and estimators built on partition values and continued
// fractions: zeta ratios, cone bounds, the convergent sandwich for log Z_N / N,
// free-energy series under arbitrary scalings, the two explicit constructions
// and the classification report.

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dioph/contfrac.hpp"
#include "dioph/numerics.hpp"
#include "dioph/partition.hpp"

namespace dioph {

constexpr std::uint64_t kZetaTerms = 100'000;

// zeta(beta - 1) / zeta(beta) for beta > 2, from direct series with convex
// integral tail enclosures.
RealScalar zeta_ratio(const RealScalar& beta, std::uint64_t terms = kZetaTerms);
// zeta(s) for s > 1.
RealScalar zeta(const RealScalar& s, std::uint64_t terms = kZetaTerms);

// Euler's phi for 0..n by sieve.
std::vector<std::uint32_t> totients(std::uint32_t n);

// sum_{n <= n_max} phi(n) n^-beta (partial sum only).
RealScalar totient_sum(const RealScalar& beta, std::uint64_t n_max);
// Upper bound on sum_{n > n_max} phi(n) n^-beta, via phi(n) <= n.
Interval totient_tail_bound(const RealScalar& beta, std::uint64_t n_max, Precision prec = 128);

// For each n <= cutoff, the number of pairs a >= 1, b >= 0 with a + b = n and
// gcd(a, b) = 1, counted by brute force.
std::vector<std::uint64_t> coprime_pair_counts(std::uint32_t cutoff);

// sum over coprime a >= 1, b >= 0 of (a + b)^-beta: the partial sum up to
// a + b <= cutoff widened by the certified tail.
RealScalar coprime_pair_sum(const RealScalar& beta, std::uint32_t cutoff);

struct LatticeVector {
  mpz_class p;
  mpz_class q;
};

// {a v1 + b v2 : a >= 1, b >= 0, gcd(a, b) = 1}; d1 < d2 are the extreme
// reciprocal distances 1 / |p - alpha q| of the generators.
struct Cone {
  RealScalar alpha;
  LatticeVector v1;
  LatticeVector v2;
  RealScalar d1;
  RealScalar d2;
};

// Throws DomainError unless det(v1, v2) = +-1 and both vectors lie strictly
// on the same side of the line x = alpha y.
Cone make_cone(const RealScalar& alpha, const LatticeVector& v1, const LatticeVector& v2);

struct ConeBounds {
  RealScalar lower;  // d1^beta * zeta ratio
  RealScalar upper;  // d2^beta * zeta ratio
};

ConeBounds cone_bounds(const Cone& cone, const RealScalar& beta);

struct ConeSum {
  Interval partial;  // terms with a + b <= cutoff
  Interval total;    // partial widened by the tail bound
};

ConeSum cone_partial_sum(const Cone& cone, const RealScalar& beta, std::uint32_t cutoff, Precision prec = 128);

struct SandwichBound {
  mpz_class N;
  long m;             // N_m <= N < N_{m+1}; -1 below a_0
  RealScalar lower;   // beta log(d_N) / N
  RealScalar upper;   // log(zeta ratio * N * d_{N_m}^beta) / N
  std::optional<Interval> value;  // log(Z_N) / N when enumerated
  bool holds = false;             // certified lower <= value <= upper
};

// Bounds for one N >= 1. Below a_0 the convergent index is -1 with
// p_N/q_N = N/1 and d_{N_m} = 1.
SandwichBound thm46_bounds(const RealScalar& alpha, const CFExpansion& cf, const RealScalar& beta,
                           const mpz_class& N);

// Bounds for N = 1..N_max checked against enumerated Z_N.
std::vector<SandwichBound> sandwich_sweep(const RealScalar& alpha, const CFExpansion& cf, const RealScalar& beta,
                                          unsigned N_max, const EngineOptions& opts = {});

// Denominator of a free-energy quotient. Custom scales only see N, so they
// cannot depend on the data being scaled.
class Scale {
 public:
  static Scale power(double k);
  static Scale sqrtN_logN();
  static Scale custom(std::string tag, std::function<Interval(const mpz_class&, Precision)> fn);
  // Parses "N^k", "N", "sqrtN_logN".
  static Scale parse(const std::string& text);

  const std::string& tag() const { return tag_; }
  Interval operator()(const mpz_class& N, Precision prec) const { return fn_(N, prec); }

 private:
  Scale(std::string tag, std::function<Interval(const mpz_class&, Precision)> fn)
      : tag_(std::move(tag)), fn_(std::move(fn)) {}

  std::string tag_;
  std::function<Interval(const mpz_class&, Precision)> fn_;
};

std::vector<Scale> default_scales();

struct SeriesPoint {
  mpz_class N;
  Interval enclosure;     // log(Z_N) / scale(N), or the sandwich hull beyond the cap
  bool from_bounds = false;
};

struct FreeEnergySeries {
  std::string alpha;
  RealScalar beta;
  std::string scale_tag;
  std::vector<SeriesPoint> points;
};

// Enumerated points for N <= cap; sandwich-bound pairs (rescaled by
// N / scale(N)) beyond.
FreeEnergySeries free_energy_series(const RealScalar& alpha, const CFExpansion& cf, const RealScalar& beta,
                                    const std::vector<unsigned>& N_list, const Scale& scale,
                                    const EngineOptions& opts = {}, unsigned cap = kEnumerationCap);

struct LimitPoint {
  std::size_t m;
  mpz_class N;
  Interval log_q;      // log q_{N_m}
  Interval raw;        // log q_{N_m} / scale(N_m)
  std::optional<Interval> increment;  // windowed difference quotient
  std::size_t window = 0;
};

struct LimitEstimate {
  std::string scale_tag;
  std::vector<LimitPoint> points;
  bool capped = false;  // the digit cap stopped the expansion early
};

// m = 0 .. m_max. The increment estimator
// (log q_m - log q_{m-w}) / (scale(N_m) - scale(N_{m-w})) uses the period
// length as window for surds and w = ceil(m / 2) otherwise.
LimitEstimate convergent_limit_estimate(const CFExpansion& cf, const Scale& scale, std::size_t m_max,
                                        Precision prec = 256);

// log(lambda_max(C)) / (c_1 + ... + c_l) for the period matrix
// C = prod (0 1 / 1 c_i) of a surd expansion.
RealScalar quad_free_energy(const CFExpansion& cf);

// An expansion defined by a_{m+1} = q_{N_m}^{f(m)} after fixed seeds, with
// f(m) = m (index) or f(m) = N_m (checkpoint).
struct Construction {
  enum class Exponent { index, checkpoint };

  std::string name;
  CFExpansion cf;
  Exponent exponent;

  mpz_class f(std::size_t m, const mpz_class& N_m) const {
    return exponent == Exponent::index ? mpz_class(static_cast<unsigned long>(m)) : N_m;
  }
};

// a_0 = 1, a_1 = 2, then f(m) = m for m >= 1.
Construction construct_thm42(std::size_t digit_cap = kDefaultDigitCap);
// a_0 = 1, then f(m) = N_m for m >= 0.
Construction construct_thm43(std::size_t digit_cap = kDefaultDigitCap);

struct DiagnosticPoint {
  std::size_t m;
  Interval value;  // beta (f(m) + 1) log q_{N_m} / N_m
  bool log_space = false;  // q_{N_m} beyond the digit cap, evaluated through logarithms
};

// Diagnostic for m >= from_m over the materializable prefix plus one
// log-space step past the digit cap.
std::vector<DiagnosticPoint> construction_diagnostic(const Construction& c, const RealScalar& beta,
                                                     std::size_t from_m = 2, std::size_t m_max = 64);

bool strictly_decreasing(const std::vector<DiagnosticPoint>& pts);
bool strictly_increasing(const std::vector<DiagnosticPoint>& pts);

enum class Verdict { supported, refuted, inconclusive };
std::string to_string(Verdict v);

enum class Trend { stable, decaying, diverging, unknown };
std::string to_string(Trend t);

struct ScaleFinding {
  std::string scale_tag;
  Trend trend = Trend::unknown;
  bool cauchy = false;       // relative change < tolerance across the window
  double max_rel_change = 0;
  double doubling_ratio = 0;  // estimate(m) / estimate(m / 2)
  Interval limit_window;      // hull of the final window widened by its spread
  std::size_t m_last = 0;
};

struct ClassifyBudget {
  std::size_t m_max = 400;
  std::size_t window = 5;
  double tolerance = 1e-2;
  unsigned enumerate_N = 16;
  std::vector<double> k_grid{1.25, 1.5, 2.0};
  EngineOptions engine;
};

struct ClassificationReport {
  std::string alpha;
  RealScalar beta;
  Verdict one_free_energy = Verdict::inconclusive;
  std::string one_free_energy_evidence;
  Verdict k_free_energy_zero = Verdict::inconclusive;
  std::string k_free_energy_evidence;
  std::optional<std::string> fitted_scale;
  std::vector<ScaleFinding> scales;
  // beta times the N^1 limit window, when that scale is stable.
  std::optional<Interval> free_energy_window;
  std::vector<DiagnosticPoint> diagnostic;
  // Enumerated log Z_N / N with the sandwich check, N = 1 .. enumerate_N.
  std::vector<SandwichBound> sandwich;
  bool sandwich_holds = true;
};

ClassificationReport classify(const std::string& alpha_name, const RealScalar& alpha, const CFExpansion& cf,
                              const RealScalar& beta, const ClassifyBudget& budget = {},
                              const Construction* construction = nullptr);

}  // namespace dioph
