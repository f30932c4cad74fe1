#include "dioph/partition.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <climits>
#include <cmath>
#include <cstdint>
#include <type_traits>
#include <exception>
#include <map>
#include <mutex>
#include <thread>
#include <utility>

#include "dioph/errors.hpp"

namespace dioph {

std::string to_string(PartitionMethod method) {
  switch (method) {
    case PartitionMethod::dfs: return "dfs";
    case PartitionMethod::recursion: return "recursion";
    case PartitionMethod::set_form: return "set-form";
    case PartitionMethod::series: return "series";
  }
  return "unknown";
}

namespace {

constexpr unsigned kUnitTarget = 256;  // work units per traversal, before rounding to k^depth
constexpr std::size_t kMaxLevels = 16;

mpz_class to_mpz(std::uint64_t v) { return mpz_class(static_cast<unsigned long>(v)); }
const mpz_class& to_mpz(const mpz_class& v) { return v; }

Interval scale(const Interval& x, std::uint64_t k) {
  Interval out(x.precision());
  mpfr_mul_ui(out.lo().get(), x.lo().get(), k, MPFR_RNDD);
  mpfr_mul_ui(out.hi().get(), x.hi().get(), k, MPFR_RNDU);
  return out;
}
Interval scale(const Interval& x, const mpz_class& k) { return mul(x, k); }

// |x|^-n for an integer n >= 0 and x bounded away from zero.
Interval inv_pow_int(const Interval& x, unsigned long n) {
  if (x.contains_zero()) throw ZeroFormError("inv_pow of an interval containing zero");
  Interval a = abs(x);
  Interval out(a.precision());
  Float t(a.precision());
  mpfr_pow_ui(t.get(), a.hi().get(), n, MPFR_RNDU);
  mpfr_ui_div(out.lo().get(), 1, t.get(), MPFR_RNDD);
  mpfr_pow_ui(t.get(), a.lo().get(), n, MPFR_RNDD);
  mpfr_ui_div(out.hi().get(), 1, t.get(), MPFR_RNDU);
  return out;
}

std::optional<unsigned long> small_integer(const RealScalar& x) {
  auto v = x.exact_value();
  if (!v || v->get_den() != 1 || *v < 0 || !v->get_num().fits_ulong_p()) return std::nullopt;
  return v->get_num().get_ui();
}

std::string word_string(const std::vector<std::uint8_t>& letters) {
  std::string s;
  for (auto l : letters) s.push_back(static_cast<char>('0' + l));
  return s.empty() ? std::string("(empty)") : s;
}

RealScalar cached_scalar(std::function<Interval(unsigned)> fn, std::string description, unsigned bits) {
  return RealScalar::from_cached_function([fn = std::move(fn)](Precision w) { return fn(static_cast<unsigned>(w)); },
                                          std::move(description), bits);
}

// Evaluates |M * W|^-beta f(M W^T) for full word matrices W, choosing per term
// the smallest precision level whose result meets the relative-width target.
class TermEvaluator {
 public:
  TermEvaluator(const PartitionSpec& spec, unsigned target_bits)
      : spec_(spec), target_bits_(target_bits), int_beta_(small_integer(spec.beta)) {
    const RealScalar* entries[4] = {&spec.M.a, &spec.M.b, &spec.M.c, &spec.M.d};
    exact_ = true;
    for (int i = 0; i < 4; ++i) {
      auto v = entries[i]->exact_value();
      zero_[i] = v && *v == 0;
      if (v) {
        exact_m_[i] = *v;
      } else {
        exact_ = false;
      }
    }
    if (zero_[0] && zero_[1] && zero_[2] && zero_[3]) throw DomainError("weight matrix is zero");
    small_int_ = exact_;
    for (int i = 0; i < 4 && small_int_; ++i) {
      if (exact_m_[i].get_den() != 1 || !exact_m_[i].get_num().fits_slong_p()) {
        small_int_ = false;
      } else {
        small_m_[i] = exact_m_[i].get_num().get_si();
      }
    }
    const PrecisionPolicy policy = precision_policy();
    max_bits_ = policy.max_bits;
    base_ = std::min(max_bits_, std::max<Precision>(policy.start_bits, target_bits + 16));
  }

  unsigned target_bits() const { return target_bits_; }

  // Enclosure of M * W at a precision level.
  template <class E>
  Interval hs(std::size_t lvl, const E& a, const E& b, const E& c, const E& d, const std::vector<std::uint8_t>& path) const {
    const Level& L = level(lvl);
    if constexpr (std::is_same_v<E, std::uint64_t>) {
      if (small_int_) {
        __int128 x = 0;
        const E* w[4] = {&a, &b, &c, &d};
        for (int i = 0; i < 4; ++i) x += static_cast<__int128>(small_m_[i]) * static_cast<__int128>(*w[i]);
        if (x == 0) throw ZeroFormError("M * w vanishes for word " + word_string(path));
        if (x > INT64_MAX || x < INT64_MIN) return hs_exact(L.prec, a, b, c, d, path);
        return Interval::from_long(static_cast<long>(x), L.prec);
      }
    }
    if (exact_) return hs_exact(L.prec, a, b, c, d, path);
    Interval x = Interval::from_long(0, L.prec);
    const E* w[4] = {&a, &b, &c, &d};
    for (int i = 0; i < 4; ++i) {
      if (!zero_[i]) x += scale(L.m[i], *w[i]);
    }
    return x;
  }

  template <class E>
  Interval hs_exact(Precision prec, const E& a, const E& b, const E& c, const E& d,
                    const std::vector<std::uint8_t>& path) const {
    mpq_class x = 0;
    const E* w[4] = {&a, &b, &c, &d};
    for (int i = 0; i < 4; ++i) {
      if (!zero_[i]) x += exact_m_[i] * to_mpz(*w[i]);
    }
    if (x == 0) throw ZeroFormError("M * w vanishes for word " + word_string(path));
    return Interval::from_mpq(x, prec);
  }

  template <class E>
  Interval term(const E& a, const E& b, const E& c, const E& d, const std::vector<std::uint8_t>& path,
                Interval* hs_out = nullptr) const {
    for (std::size_t lvl = 0;; ++lvl) {
      const Level& L = level(lvl);
      Interval x = hs(lvl, a, b, c, d, path);
      if (!x.contains_zero()) {
        Interval t = int_beta_ ? inv_pow_int(x, *int_beta_) : inv_pow(x, L.beta);
        if (spec_.f) {
          IntMat2 W{to_mpz(a), to_mpz(b), to_mpz(c), to_mpz(d)};
          t = t * spec_.f(spec_.M.times_transpose(W)).at(L.prec);
        }
        if (t.relative_width() <= target_double() ||
            (spec_.f && mpfr_cmp_d(t.width().get(), target_double()) <= 0)) {
          if (hs_out) *hs_out = x;
          return t;
        }
      }
      if (L.prec >= max_bits_ || lvl + 1 >= kMaxLevels) {
        throw PrecisionExhausted("term for word " + word_string(path) + " not resolved at the precision cap");
      }
    }
  }

  Precision accumulator_precision() const { return std::min<Precision>(max_bits_, base_ + 32); }

 private:
  struct Level {
    Precision prec = 64;
    std::array<Interval, 4> m;
    Interval beta;
  };

  double target_double() const { return std::ldexp(1.0, -static_cast<int>(target_bits_)); }

  const Level& level(std::size_t i) const {
    std::call_once(once_[i], [this, i] {
      Level& L = levels_[i];
      L.prec = std::min<Precision>(max_bits_, base_ << i);
      const RealScalar* entries[4] = {&spec_.M.a, &spec_.M.b, &spec_.M.c, &spec_.M.d};
      const Precision guarded = std::min<Precision>(max_bits_, L.prec + 16);
      for (int k = 0; k < 4; ++k) L.m[k] = entries[k]->at(guarded);
      L.beta = spec_.beta.at(guarded);
    });
    return levels_[i];
  }

  const PartitionSpec& spec_;
  unsigned target_bits_;
  std::optional<unsigned long> int_beta_;
  bool exact_ = false;
  bool zero_[4] = {false, false, false, false};
  mpq_class exact_m_[4];
  bool small_int_ = false;
  long small_m_[4] = {0, 0, 0, 0};
  Precision base_ = 64;
  Precision max_bits_ = 64;
  mutable std::array<std::once_flag, kMaxLevels> once_;
  mutable std::array<Level, kMaxLevels> levels_;
};

// Matrix entries, either machine words (when a bound proves no overflow) or
// big integers.
template <class E>
struct Mat {
  E a, b, c, d;
};

template <class E>
Mat<E> times(const Mat<E>& w, const Mat<E>& x) {
  return {w.a * x.a + w.b * x.c, w.a * x.b + w.b * x.d, w.c * x.a + w.d * x.c, w.c * x.b + w.d * x.d};
}

template <class E>
Mat<E> convert(const IntMat2& m);

template <>
Mat<std::uint64_t> convert(const IntMat2& m) {
  return {m.a.get_ui(), m.b.get_ui(), m.c.get_ui(), m.d.get_ui()};
}
template <>
Mat<mpz_class> convert(const IntMat2& m) {
  return {m.a, m.b, m.c, m.d};
}

// True when every entry of prefix * (word of length n) stays below 2^62.
bool fits_machine_words(const IntMat2& prefix, const MatrixTuple& alphabet, unsigned n) {
  mpz_class growth = 1;
  for (const auto& A : alphabet) {
    if (A.a < 0 || A.b < 0 || A.c < 0 || A.d < 0) return false;
    growth = std::max(growth, mpz_class(A.a + A.b + A.c + A.d));
  }
  if (prefix.a < 0 || prefix.b < 0 || prefix.c < 0 || prefix.d < 0) return false;
  mpz_class bound = std::max({prefix.a, prefix.b, prefix.c, prefix.d, mpz_class(1)}) * 2;
  mpz_class g;
  mpz_pow_ui(g.get_mpz_t(), growth.get_mpz_t(), n);
  bound *= g;
  return mpz_sizeinbase(bound.get_mpz_t(), 2) < 62;
}

unsigned unit_depth(std::size_t k, unsigned N) {
  unsigned depth = 0;
  std::size_t units = 1;
  while (depth < N && units * k <= kUnitTarget) {
    units *= k;
    ++depth;
  }
  return depth;
}

// Runs `work(u)` for u in [0, count) on up to `threads` workers; rethrows the
// exception of the smallest failing unit so errors are deterministic too.
void run_units(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& work) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t u = next++; u < count; u = next++) {
      try {
        work(u);
      } catch (...) {
        errors[u] = std::current_exception();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Letters of the u-th word of length `depth` in lexicographic order.
std::vector<std::uint8_t> unit_word(std::size_t u, std::size_t k, unsigned depth) {
  std::vector<std::uint8_t> letters(depth);
  for (unsigned i = depth; i-- > 0;) {
    letters[i] = static_cast<std::uint8_t>(u % k);
    u /= k;
  }
  return letters;
}

std::uint64_t checked_count(std::size_t k, unsigned N) {
  mpz_class c;
  mpz_ui_pow_ui(c.get_mpz_t(), k, N);
  if (!c.fits_ulong_p()) throw CapExceeded("term count overflows");
  return c.get_ui();
}

void check_spec(const PartitionSpec& spec) {
  if (spec.alphabet.empty()) throw DomainError("alphabet is empty");
  if (spec.alphabet.size() > 10) throw DomainError("alphabets are limited to 10 letters");
  if (spec.N > spec.cap) {
    throw CapExceeded("word length " + std::to_string(spec.N) + " exceeds the enumeration cap " +
                      std::to_string(spec.cap));
  }
}

template <class E>
class DfsSum {
 public:
  DfsSum(const PartitionSpec& spec, const TermEvaluator& eval) : spec_(spec), eval_(eval) {
    for (const auto& A : spec.alphabet) alphabet_.push_back(convert<E>(A));
  }

  Interval unit(const std::vector<std::uint8_t>& letters) const {
    Mat<E> w = convert<E>(spec_.prefix);
    for (auto l : letters) w = times(w, alphabet_[l]);
    Interval acc = Interval::from_long(0, eval_.accumulator_precision());
    std::vector<std::uint8_t> path = letters;
    visit(w, spec_.N - static_cast<unsigned>(letters.size()), path, acc);
    return acc;
  }

 private:
  void visit(const Mat<E>& w, unsigned remaining, std::vector<std::uint8_t>& path, Interval& acc) const {
    if (remaining == 0) {
      acc += eval_.term(w.a, w.b, w.c, w.d, path);
      return;
    }
    for (std::size_t i = 0; i < alphabet_.size(); ++i) {
      path.push_back(static_cast<std::uint8_t>(i));
      visit(times(w, alphabet_[i]), remaining - 1, path, acc);
      path.pop_back();
    }
  }

  const PartitionSpec& spec_;
  const TermEvaluator& eval_;
  std::vector<Mat<E>> alphabet_;
};

Interval dfs_enclosure(const PartitionSpec& spec, unsigned target_bits, unsigned threads) {
  TermEvaluator eval(spec, target_bits);
  const std::size_t k = spec.alphabet.size();
  const unsigned depth = unit_depth(k, spec.N);
  const std::size_t count = checked_count(k, depth);
  std::vector<Interval> partial(count);
  const bool machine = fits_machine_words(spec.prefix, spec.alphabet, spec.N);
  DfsSum<std::uint64_t> fast(spec, eval);
  DfsSum<mpz_class> big(spec, eval);
  run_units(count, threads, [&](std::size_t u) {
    auto letters = unit_word(u, k, depth);
    partial[u] = machine ? fast.unit(letters) : big.unit(letters);
  });
  Interval total = Interval::from_long(spec.include_infinity_term ? 1 : 0, eval.accumulator_precision());
  for (const auto& p : partial) total += p;
  return total;
}

std::string spec_description(const PartitionSpec& spec) {
  return "Z_" + std::to_string(spec.N) + "(beta=" + spec.beta.describe() + ")";
}

// Last-letter recursion on interval matrices M A_i^T.
struct IMat {
  Interval a, b, c, d;
};

IMat times_transpose(const IMat& m, const IntMat2& x) {
  return {mul(m.a, x.a) + mul(m.b, x.b), mul(m.a, x.c) + mul(m.b, x.d), mul(m.c, x.a) + mul(m.d, x.b),
          mul(m.c, x.c) + mul(m.d, x.d)};
}

Interval recursion_enclosure(const PartitionSpec& spec, Precision prec) {
  const auto int_beta = small_integer(spec.beta);
  const Interval beta = spec.beta.at(prec);
  const IMat root{spec.M.a.at(prec), spec.M.b.at(prec), spec.M.c.at(prec), spec.M.d.at(prec)};
  Interval acc = Interval::from_long(spec.include_infinity_term ? 1 : 0, prec);
  std::vector<std::uint8_t> suffix;  // letters chosen so far, last letter first
  std::function<void(const IMat&, unsigned)> go = [&](const IMat& m, unsigned n) {
    if (n == 0) {
      const IntMat2& P = spec.prefix;
      Interval x = mul(m.a, P.a) + mul(m.b, P.b) + mul(m.c, P.c) + mul(m.d, P.d);
      if (x.contains_zero()) {
        std::vector<std::uint8_t> word(suffix.rbegin(), suffix.rend());
        if (spec.M.is_exact()) throw ZeroFormError("M * w vanishes for word " + word_string(word));
        acc = Interval::entire(prec);
        return;
      }
      Interval t = int_beta ? inv_pow_int(x, *int_beta) : inv_pow(x, beta);
      if (spec.f) {
        std::vector<std::uint8_t> word(suffix.rbegin(), suffix.rend());
        IntMat2 W = mat_mul(spec.prefix, word_matrix(Word{word}, spec.alphabet));
        t = t * spec.f(spec.M.times_transpose(W)).at(prec);
      }
      acc += t;
      return;
    }
    for (std::size_t i = 0; i < spec.alphabet.size(); ++i) {
      suffix.push_back(static_cast<std::uint8_t>(i));
      go(times_transpose(m, spec.alphabet[i]), n - 1);
      suffix.pop_back();
    }
  };
  go(root, spec.N);
  return acc;
}

// Pairwise sum of unreduced fractions (num, den); canonicalized once at the end.
mpq_class sum_fractions(std::vector<std::pair<mpz_class, mpz_class>> fr) {
  if (fr.empty()) return 0;
  while (fr.size() > 1) {
    std::vector<std::pair<mpz_class, mpz_class>> next;
    next.reserve((fr.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < fr.size(); i += 2) {
      next.emplace_back(fr[i].first * fr[i + 1].second + fr[i + 1].first * fr[i].second,
                        fr[i].second * fr[i + 1].second);
    }
    if (fr.size() % 2) next.push_back(std::move(fr.back()));
    fr = std::move(next);
  }
  mpq_class out(fr[0].first, fr[0].second);
  out.canonicalize();
  return out;
}

template <class E>
class SeriesSum {
 public:
  SeriesSum(const PartitionSpec& spec, const TermEvaluator& eval, unsigned N_max)
      : eval_(eval), N_max_(N_max), a0_(convert<E>(IntMat2::A0())), a1_(convert<E>(IntMat2::A1())) {
    (void)spec;
  }

  // Adds term(w A1) to levels[|w| + 1] for every w in the subtree of `root`
  // with |w| < N_max, stopping the descent at depth `stop`.
  void visit(const Mat<E>& w, unsigned depth, unsigned stop, std::vector<std::uint8_t>& path,
             std::vector<Interval>& levels) const {
    if (depth >= N_max_) return;
    const Mat<E> right = times(w, a1_);
    path.push_back(1);
    levels[depth + 1] += eval_.term(right.a, right.b, right.c, right.d, path);
    if (depth + 1 < stop) {
      visit(right, depth + 1, stop, path, levels);
      path.back() = 0;
      visit(times(w, a0_), depth + 1, stop, path, levels);
    }
    path.pop_back();
  }

  Mat<E> matrix_of(const std::vector<std::uint8_t>& letters) const {
    Mat<E> w = convert<E>(IntMat2::identity());
    for (auto l : letters) w = times(w, l ? a1_ : a0_);
    return w;
  }

 private:
  const TermEvaluator& eval_;
  unsigned N_max_;
  Mat<E> a0_, a1_;
};

template <class E>
std::vector<Interval> series_levels(const PartitionSpec& spec, const TermEvaluator& eval, unsigned N_max,
                                    unsigned threads) {
  const Precision acc_prec = eval.accumulator_precision();
  auto zeros = [&] { return std::vector<Interval>(N_max + 1, Interval::from_long(0, acc_prec)); };
  SeriesSum<E> sum(spec, eval, N_max);
  std::vector<Interval> levels = zeros();
  std::vector<std::uint8_t> path;
  const Mat<E> id = sum.matrix_of({});
  levels[0] += eval.term(id.a, id.b, id.c, id.d, path);
  if (N_max == 0) return levels;

  // Nodes above the unit depth are visited here; each unit then owns the
  // subtree below one node at that depth.
  const unsigned depth = unit_depth(2, N_max - 1);
  sum.visit(id, 0, depth, path, levels);
  const std::size_t count = checked_count(2, depth);
  std::vector<std::vector<Interval>> partial(count);
  run_units(count, threads, [&](std::size_t u) {
    auto letters = unit_word(u, 2, depth);
    std::vector<Interval> local = zeros();
    sum.visit(sum.matrix_of(letters), depth, N_max, letters, local);
    partial[u] = std::move(local);
  });
  for (const auto& part : partial) {
    for (unsigned n = 0; n <= N_max; ++n) levels[n] += part[n];
  }
  return levels;
}

std::vector<Interval> diophantine_series_enclosures(const RealScalar& alpha, unsigned N_max, const RealScalar& beta,
                                                    unsigned target_bits, unsigned threads) {
  PartitionSpec spec;
  spec.N = N_max;
  spec.M = WeightMatrix::diophantine(alpha);
  spec.beta = beta;
  TermEvaluator eval(spec, target_bits);
  std::vector<Interval> levels = fits_machine_words(IntMat2::identity(), spec.alphabet, N_max)
                                     ? series_levels<std::uint64_t>(spec, eval, N_max, threads)
                                     : series_levels<mpz_class>(spec, eval, N_max, threads);
  for (unsigned n = 1; n <= N_max; ++n) levels[n] = levels[n - 1] + levels[n];
  return levels;
}

template <class E>
void visit_terms(const PartitionSpec& spec, const TermEvaluator& eval, const std::vector<Mat<E>>& alphabet,
                 const Mat<E>& w, unsigned remaining, std::vector<std::uint8_t>& path,
                 const std::function<void(const TermRecord&)>& visit) {
  if (remaining == 0) {
    TermRecord rec;
    rec.word.letters = path;
    rec.p = to_mpz(w.b);
    rec.q = to_mpz(w.d);
    rec.term = eval.term(w.a, w.b, w.c, w.d, path, &rec.hs);
    visit(rec);
    return;
  }
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    path.push_back(static_cast<std::uint8_t>(i));
    visit_terms(spec, eval, alphabet, times(w, alphabet[i]), remaining - 1, path, visit);
    path.pop_back();
  }
}

}  // namespace

PartitionResult z_general(const PartitionSpec& spec, const EngineOptions& opts) {
  check_spec(spec);
  const unsigned threads = opts.threads;
  auto compute = [spec, threads](unsigned bits) { return dfs_enclosure(spec, bits, threads); };
  PartitionResult r;
  r.value = cached_scalar(compute, spec_description(spec), opts.target_bits);
  r.N = spec.N;
  r.beta = spec.beta;
  r.method = PartitionMethod::dfs;
  r.term_count = checked_count(spec.alphabet.size(), spec.N) + (spec.include_infinity_term ? 1 : 0);
  return r;
}

PartitionResult z_recursion(const PartitionSpec& spec, const EngineOptions& opts) {
  check_spec(spec);
  auto compute = [spec](unsigned bits) {
    const PrecisionPolicy policy = precision_policy();
    for (Precision w = std::min(policy.max_bits, std::max<Precision>(policy.start_bits, 2 * bits + 32));; w = std::min(policy.max_bits, 2 * w)) {
      Interval v = recursion_enclosure(spec, w);
      if (v.relative_width() <= std::ldexp(1.0, -static_cast<int>(bits))) return v;
      if (w >= policy.max_bits) {
        throw PrecisionExhausted("recursion for " + spec_description(spec) + " not resolved at the precision cap");
      }
    }
  };
  PartitionResult r;
  r.value = cached_scalar(compute, spec_description(spec), opts.target_bits);
  r.N = spec.N;
  r.beta = spec.beta;
  r.method = PartitionMethod::recursion;
  r.term_count = checked_count(spec.alphabet.size(), spec.N) + (spec.include_infinity_term ? 1 : 0);
  return r;
}

std::optional<mpq_class> z_exact(const PartitionSpec& spec) {
  check_spec(spec);
  if (spec.f || !spec.M.is_exact()) return std::nullopt;
  const auto beta = small_integer(spec.beta);
  if (!beta) return std::nullopt;

  // M = M' / D with M' integral.
  const mpq_class m[4] = {*spec.M.a.exact_value(), *spec.M.b.exact_value(), *spec.M.c.exact_value(),
                          *spec.M.d.exact_value()};
  mpz_class D = 1;
  for (const auto& v : m) mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), v.get_den().get_mpz_t());
  mpz_class mi[4];
  for (int i = 0; i < 4; ++i) mi[i] = m[i].get_num() * (D / m[i].get_den());

  std::map<mpz_class, std::uint64_t> counts;
  std::vector<std::uint8_t> path;
  std::function<void(const IntMat2&, unsigned)> go = [&](const IntMat2& w, unsigned remaining) {
    if (remaining == 0) {
      mpz_class x = mi[0] * w.a + mi[1] * w.b + mi[2] * w.c + mi[3] * w.d;
      if (x == 0) throw ZeroFormError("M * w vanishes for word " + word_string(path));
      ++counts[abs(x)];
      return;
    }
    for (std::size_t i = 0; i < spec.alphabet.size(); ++i) {
      path.push_back(static_cast<std::uint8_t>(i));
      go(mat_mul(w, spec.alphabet[i]), remaining - 1);
      path.pop_back();
    }
  };
  go(spec.prefix, spec.N);

  mpz_class scale_num;
  mpz_pow_ui(scale_num.get_mpz_t(), D.get_mpz_t(), *beta);
  std::vector<std::pair<mpz_class, mpz_class>> fr;
  fr.reserve(counts.size());
  for (const auto& [x, count] : counts) {
    mpz_class den;
    mpz_pow_ui(den.get_mpz_t(), x.get_mpz_t(), *beta);
    fr.emplace_back(scale_num * mpz_class(static_cast<unsigned long>(count)), std::move(den));
  }
  mpq_class total = sum_fractions(std::move(fr));
  if (spec.include_infinity_term) total += 1;
  return total;
}

Lemma31Check lemma31_split(const PartitionSpec& spec, const EngineOptions& opts) {
  if (spec.N < 1) throw DomainError("lemma31_split needs N >= 1");
  Lemma31Check out;
  out.whole = z_general(spec, opts);
  PartitionSpec part = spec;
  part.N = spec.N - 1;
  part.include_infinity_term = false;
  out.parts_sum = Interval::from_long(spec.include_infinity_term ? 1 : 0, opts.target_bits + 48);
  for (const auto& A : spec.alphabet) {
    part.M = spec.M.times_transpose(A);
    out.parts.push_back(z_general(part, opts));
    out.parts_sum += out.parts.back().value.enclosure();
  }
  out.intersects = out.whole.value.enclosure().intersects(out.parts_sum);

  out.whole_exact = z_exact(spec);
  if (out.whole_exact) {
    mpq_class sum = spec.include_infinity_term ? 1 : 0;
    bool all = true;
    for (const auto& A : spec.alphabet) {
      part.M = spec.M.times_transpose(A);
      auto v = z_exact(part);
      if (!v) {
        all = false;
        break;
      }
      sum += *v;
    }
    if (all) {
      out.parts_exact = sum;
      out.exact_equal = *out.whole_exact == sum;
    }
  }
  return out;
}

PartitionResult z_knauf(unsigned N, const RealScalar& beta, KnaufForm form, const EngineOptions& opts) {
  if (form == KnaufForm::matrix) {
    PartitionSpec spec;
    spec.N = N;
    spec.M = WeightMatrix::knauf();
    spec.beta = beta;
    spec.prefix = IntMat2::A0();
    return z_general(spec, opts);
  }
  if (N > kEnumerationCap) {
    throw CapExceeded("Farey level " + std::to_string(N) + " exceeds the enumeration cap");
  }
  // F_N inside (0,1): mediants below 0/1 < 1/1 down to depth N - 1.
  auto compute = [N, beta](unsigned bits) {
    PartitionSpec spec;
    spec.beta = beta;
    TermEvaluator eval(spec, bits);
    Interval acc = Interval::from_long(0, eval.accumulator_precision());
    std::vector<std::uint8_t> path;
    std::function<void(std::uint64_t, std::uint64_t, std::uint64_t, std::uint64_t, unsigned)> go =
        [&](std::uint64_t ln, std::uint64_t ld, std::uint64_t rn, std::uint64_t rd, unsigned depth) {
          if (depth == 0) return;
          const std::uint64_t mn = ln + rn;
          const std::uint64_t md = ld + rd;
          go(ln, ld, mn, md, depth - 1);
          acc += eval.term(std::uint64_t{0}, std::uint64_t{0}, std::uint64_t{0}, md, path);
          go(mn, md, rn, rd, depth - 1);
        };
    if (N >= 1) go(0, 1, 1, 1, N - 1);
    return acc;
  };
  PartitionResult r;
  r.value = cached_scalar(compute, "Z^K_" + std::to_string(N) + " (set form)", opts.target_bits);
  r.N = N;
  r.beta = beta;
  r.method = PartitionMethod::set_form;
  r.term_count = N >= 1 ? (std::uint64_t{1} << (N - 1)) - 1 : 0;
  return r;
}

RealScalar knauf_form_gap(unsigned N, const RealScalar& beta, const EngineOptions& opts) {
  return z_knauf(N, beta, KnaufForm::matrix, opts).value - z_knauf(N + 1, beta, KnaufForm::set, opts).value;
}

PartitionResult z_fiala_kleban(unsigned N, const RealScalar& x, const RealScalar& beta, const EngineOptions& opts) {
  PartitionSpec spec;
  spec.N = N;
  spec.M = WeightMatrix::fiala_kleban(x);
  spec.beta = beta;
  spec.prefix = IntMat2::A0();
  return z_general(spec, opts);
}

PartitionResult z_diophantine(const RealScalar& alpha, unsigned N, const RealScalar& beta, bool include_infinity_term,
                              const EngineOptions& opts) {
  PartitionSpec spec;
  spec.N = N;
  spec.M = WeightMatrix::diophantine(alpha);
  spec.beta = beta;
  spec.include_infinity_term = include_infinity_term;
  return z_general(spec, opts);
}

std::vector<PartitionResult> z_diophantine_series(const RealScalar& alpha, unsigned N_max, const RealScalar& beta,
                                                  const EngineOptions& opts, unsigned cap) {
  if (N_max > cap) {
    throw CapExceeded("word length " + std::to_string(N_max) + " exceeds the enumeration cap " + std::to_string(cap));
  }
  const unsigned threads = opts.threads;
  auto shared = std::make_shared<std::vector<Interval>>(
      diophantine_series_enclosures(alpha, N_max, beta, opts.target_bits, threads));
  std::vector<PartitionResult> out;
  for (unsigned n = 0; n <= N_max; ++n) {
    PartitionResult r;
    auto compute = [alpha, beta, n, threads, shared, first = opts.target_bits](unsigned bits) {
      if (bits <= first) return (*shared)[n];
      return diophantine_series_enclosures(alpha, n, beta, bits, threads)[n];
    };
    r.value = cached_scalar(compute, "Z_" + std::to_string(n) + "(" + alpha.describe() + ")", opts.target_bits);
    r.N = n;
    r.beta = beta;
    r.method = PartitionMethod::series;
    r.term_count = std::uint64_t{1} << n;
    out.push_back(std::move(r));
  }
  return out;
}

RealScalar state_energy(const WeightMatrix& M, const IntMat2& word_matrix) {
  RealScalar x = hs_product(M, word_matrix);
  if (auto v = x.exact_value(); v && *v == 0) throw ZeroFormError("M * w vanishes");
  return RealScalar::from_function(
      [x](Precision w) {
        Interval e = x.at(w + 8);
        if (e.contains_zero()) {
          throw PrecisionExhausted("M * w not separated from zero");
        }
        return log(abs(e));
      },
      "log|" + x.describe() + "|");
}

RealScalar state_probability(const PartitionSpec& spec, const Word& w, const PartitionResult& Z) {
  if (w.size() != spec.N) throw DomainError("word length differs from spec.N");
  const IntMat2 W = mat_mul(spec.prefix, word_matrix(w, spec.alphabet));
  RealScalar x = hs_product(spec.M, W);
  if (auto v = x.exact_value(); v && *v == 0) throw ZeroFormError("M * w vanishes for word " + w.to_string());
  RealScalar weight = spec.f ? spec.f(spec.M.times_transpose(W)) : RealScalar::integer(1);
  RealScalar beta = spec.beta;
  RealScalar z = Z.value;
  return RealScalar::from_function(
      [x, beta, weight, z](Precision p) {
        Interval t = inv_pow(x.at(p + 16), beta.at(p + 16)) * weight.at(p + 16);
        return t / z.at(p);
      },
      "P(" + w.to_string() + ")");
}

void for_each_term(const PartitionSpec& spec, const std::function<void(const TermRecord&)>& visit,
                   unsigned target_bits) {
  check_spec(spec);
  TermEvaluator eval(spec, target_bits);
  std::vector<Mat<mpz_class>> alphabet;
  for (const auto& A : spec.alphabet) alphabet.push_back(convert<mpz_class>(A));
  std::vector<std::uint8_t> path;
  visit_terms(spec, eval, alphabet, convert<mpz_class>(spec.prefix), spec.N, path, visit);
}

}  // namespace dioph
