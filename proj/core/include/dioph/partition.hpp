#pragma once

// Partition functions over words in a matrix alphabet: the generic engine
// Z(N, M, beta, alphabet, f), its last-letter recursion, and the Knauf,
// Fiala-Kleban and Diophantine specializations.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dioph/farey.hpp"
#include "dioph/numerics.hpp"

namespace dioph {

constexpr unsigned kEnumerationCap = 26;

// Multiplicative weight applied to each term as a function of M * word^T.
using WeightFunction = std::function<RealScalar(const WeightMatrix&)>;

struct PartitionSpec {
  unsigned N = 0;
  WeightMatrix M = WeightMatrix::knauf();
  RealScalar beta = RealScalar::integer(2);
  MatrixTuple alphabet{IntMat2::A0(), IntMat2::A1()};
  // Fixed left factor of every word (A0 for the Knauf and Fiala-Kleban forms).
  IntMat2 prefix;
  // Empty means f = 1.
  WeightFunction f;
  // Adds the constant 1 contributed by 1/0 in the set-form display.
  bool include_infinity_term = false;
  unsigned cap = kEnumerationCap;
};

enum class PartitionMethod { dfs, recursion, set_form, series };

std::string to_string(PartitionMethod method);

struct PartitionResult {
  RealScalar value;
  unsigned N = 0;
  RealScalar beta;
  PartitionMethod method = PartitionMethod::dfs;
  std::uint64_t term_count = 0;
};

// Execution knobs. Results are identical for every thread count.
struct EngineOptions {
  unsigned threads = 1;
  // Each term is evaluated until its relative width is at most 2^-target_bits.
  unsigned target_bits = 48;
};

// Sum over all k^N words w of |M * (prefix w)|^(-beta) f(M (prefix w)^T), by
// depth-first traversal. Throws ZeroFormError naming the word when some
// Hilbert-Schmidt value vanishes, CapExceeded when N > spec.cap.
PartitionResult z_general(const PartitionSpec& spec, const EngineOptions& opts = {});

// The same sum evaluated by splitting on the last letter down to N = 0,
// carrying M A_i^T instead of extending the word.
PartitionResult z_recursion(const PartitionSpec& spec, const EngineOptions& opts = {});

// Exact value when every entry of M is rational, beta is a nonnegative integer
// and f is absent; nullopt otherwise.
std::optional<mpq_class> z_exact(const PartitionSpec& spec);

struct Lemma31Check {
  PartitionResult whole;              // Z_{N+1}(M)
  std::vector<PartitionResult> parts;  // Z_N(M A_i^T), one per letter
  Interval parts_sum;
  bool intersects = false;
  // Set when both sides have exact rational values.
  std::optional<mpq_class> whole_exact;
  std::optional<mpq_class> parts_exact;
  bool exact_equal = false;
};

// spec.N must be >= 1; compares Z_N(M) with sum_i Z_{N-1}(M A_i^T).
Lemma31Check lemma31_split(const PartitionSpec& spec, const EngineOptions& opts = {});

enum class KnaufForm { matrix, set };

// Matrix form: 1(M^K)|A0 (A0,A1)^N, 2^N terms. Set form: sum over
// p/q in F_N strictly inside (0,1) of q^-beta.
PartitionResult z_knauf(unsigned N, const RealScalar& beta, KnaufForm form = KnaufForm::matrix,
                        const EngineOptions& opts = {});

// matrix(N) - set(N + 1); equals 1 exactly (the 0/1 endpoint term).
RealScalar knauf_form_gap(unsigned N, const RealScalar& beta, const EngineOptions& opts = {});

PartitionResult z_fiala_kleban(unsigned N, const RealScalar& x, const RealScalar& beta,
                               const EngineOptions& opts = {});

// Sum over the 2^N right columns p/q of words of length N of |p - alpha q|^-beta.
PartitionResult z_diophantine(const RealScalar& alpha, unsigned N, const RealScalar& beta,
                              bool include_infinity_term = false, const EngineOptions& opts = {});

// Z_0 .. Z_{N_max} of the Diophantine sum in one traversal: appending A0 keeps
// the right column, so Z_{n+1} = Z_n + sum_{|w|=n} term(w A1).
std::vector<PartitionResult> z_diophantine_series(const RealScalar& alpha, unsigned N_max, const RealScalar& beta,
                                                  const EngineOptions& opts = {}, unsigned cap = kEnumerationCap);

// log |M * word| for the full word matrix.
RealScalar state_energy(const WeightMatrix& M, const IntMat2& word_matrix);
// e^(-beta E) / Z for the word prefix * w of a spec.
RealScalar state_probability(const PartitionSpec& spec, const Word& w, const PartitionResult& Z);

struct TermRecord {
  Word word;
  mpz_class p;  // right column of prefix * word
  mpz_class q;
  Interval hs;    // M * (prefix * word)
  Interval term;  // |hs|^-beta f(...)
};

// Visits every term in lexicographic word order (single-threaded).
void for_each_term(const PartitionSpec& spec, const std::function<void(const TermRecord&)>& visit,
                   unsigned target_bits = 48);

}  // namespace dioph
