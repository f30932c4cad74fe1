#include "dioph/contfrac.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <sstream>
#include <utility>

#include "dioph/errors.hpp"

namespace dioph {

// Append-only memo of quotients. produce() is only ever called with the lock
// held and with the full history so far.
class CFExpansion::Generator {
 public:
  virtual ~Generator() = default;

  std::optional<mpz_class> get(std::size_t i) {
    std::lock_guard<std::mutex> lock(mu_);
    while (cache_.size() <= i) {
      if (finished_) return std::nullopt;
      auto next = produce(cache_);
      if (!next) {
        finished_ = true;
        return std::nullopt;
      }
      cache_.push_back(std::move(*next));
    }
    return cache_[i];
  }

 protected:
  virtual std::optional<mpz_class> produce(const std::vector<mpz_class>& history) = 0;

 private:
  std::mutex mu_;
  std::vector<mpz_class> cache_;
  bool finished_ = false;
};

namespace {

using Generator = CFExpansion::Generator;

class FixedGenerator final : public Generator {
 public:
  explicit FixedGenerator(std::vector<mpz_class> terms) : terms_(std::move(terms)) {}

 protected:
  std::optional<mpz_class> produce(const std::vector<mpz_class>& history) override {
    if (history.size() >= terms_.size()) return std::nullopt;
    return terms_[history.size()];
  }

 private:
  std::vector<mpz_class> terms_;
};

class PeriodicGenerator final : public Generator {
 public:
  explicit PeriodicGenerator(SurdPeriod period) : period_(std::move(period)) {}

 protected:
  std::optional<mpz_class> produce(const std::vector<mpz_class>& history) override {
    const std::size_t i = history.size();
    if (i < period_.preperiod.size()) return period_.preperiod[i];
    return period_.period[(i - period_.preperiod.size()) % period_.period.size()];
  }

 private:
  SurdPeriod period_;
};

// Tracks p_{N_m}, q_{N_m} and N_m as quotients are appended.
struct ConvergentState {
  mpz_class p{1}, q{0};            // p_{m}, q_{m}   (start: p_{-1}, q_{-1})
  mpz_class p_prev{0}, q_prev{1};  // p_{m-1}, q_{m-1}
  mpz_class N{0};

  void push(const mpz_class& a) {
    mpz_class p_next = a * p + p_prev;
    mpz_class q_next = a * q + q_prev;
    p_prev = std::move(p);
    q_prev = std::move(q);
    p = std::move(p_next);
    q = std::move(q_next);
    N += a;
  }
};

class RuleGenerator final : public Generator {
 public:
  RuleGenerator(std::vector<mpz_class> seed, QuotientRule rule, std::size_t digit_cap)
      : seed_(std::move(seed)), rule_(std::move(rule)), digit_cap_(digit_cap) {}

 protected:
  std::optional<mpz_class> produce(const std::vector<mpz_class>& history) override {
    const std::size_t i = history.size();
    mpz_class a;
    if (i < seed_.size()) {
      a = seed_[i];
    } else {
      RuleContext ctx{i - 1, history, state_.p, state_.q, state_.p_prev, state_.q_prev, state_.N, digit_cap_};
      a = rule_(ctx);
      if (a < 1) throw DomainError("quotient rule produced a nonpositive quotient");
      if (mpz_sizeinbase(a.get_mpz_t(), 10) > digit_cap_ + 1) {
        throw CapExceeded("quotient " + std::to_string(i) + " exceeds the digit cap");
      }
    }
    state_.push(a);
    return a;
  }

 private:
  std::vector<mpz_class> seed_;
  QuotientRule rule_;
  std::size_t digit_cap_;
  ConvergentState state_;
};

class RealGenerator final : public Generator {
 public:
  explicit RealGenerator(RealScalar alpha) : alpha_(std::move(alpha)) {}

 protected:
  // Complete quotient x_i = (p_{i-2} - alpha q_{i-2}) / (alpha q_{i-1} - p_{i-1});
  // its floor is accepted once both endpoints of the enclosure agree.
  std::optional<mpz_class> produce(const std::vector<mpz_class>& history) override {
    const PrecisionPolicy policy = precision_policy();
    const long extra = static_cast<long>(mpz_sizeinbase(state_.q.get_mpz_t(), 2)) * 2 + 8;
    for (Precision w = policy.start_bits;; w = std::min(policy.max_bits, 2 * w)) {
      const Precision wide = std::min<Precision>(policy.max_bits, w + extra);
      Interval a = alpha_.at(wide);
      Interval num = Interval::from_mpz(state_.p_prev, wide) - mul(a, state_.q_prev);
      Interval den = mul(a, state_.q) - Interval::from_mpz(state_.p, wide);
      if (!den.contains_zero()) {
        Interval x = num / den;
        mpz_class lo, hi;
        mpfr_get_z(lo.get_mpz_t(), x.lo().get(), MPFR_RNDD);
        mpfr_get_z(hi.get_mpz_t(), x.hi().get(), MPFR_RNDD);
        if (lo == hi && (history.empty() || lo >= 1)) {
          state_.push(lo);
          return lo;
        }
      }
      if (wide >= policy.max_bits) {
        throw PrecisionExhausted("cannot certify quotient " + std::to_string(history.size()) + " of " +
                                 alpha_.describe());
      }
    }
  }

 private:
  RealScalar alpha_;
  ConvergentState state_;
};

// Enclosure of a rule-generated expansion from consecutive convergents. If
// the digit cap stops the expansion after a_m, the next quotient is known to
// exceed 10^cap, so |alpha - p_m/q_m| < 10^-cap / q_m^2.
class CFValueSource final : public RealSource {
 public:
  CFValueSource(std::shared_ptr<Generator> gen, std::size_t digit_cap, std::string name)
      : gen_(std::move(gen)), digit_cap_(digit_cap), name_(std::move(name)) {}

  Interval enclose(Precision working) const override {
    ConvergentState st;
    auto a0 = gen_->get(0);
    st.push(*a0);
    const mpz_class target = mpz_class(1) << (static_cast<unsigned long>(working) + 4);
    for (std::size_t i = 1;; ++i) {
      std::optional<mpz_class> a;
      try {
        a = gen_->get(i);
      } catch (const CapExceeded&) {
        Interval c = Interval::from_mpq(mpq_class(st.p, st.q), working);
        Float eps(working);
        mpfr_set_ui(eps.get(), 10, MPFR_RNDU);
        mpfr_pow_si(eps.get(), eps.get(), -static_cast<long>(digit_cap_), MPFR_RNDU);
        Float qf(working);
        mpfr_set_z(qf.get(), st.q.get_mpz_t(), MPFR_RNDD);
        mpfr_div(eps.get(), eps.get(), qf.get(), MPFR_RNDU);
        mpfr_div(eps.get(), eps.get(), qf.get(), MPFR_RNDU);
        mpfr_sub(c.lo().get(), c.lo().get(), eps.get(), MPFR_RNDD);
        mpfr_add(c.hi().get(), c.hi().get(), eps.get(), MPFR_RNDU);
        return c;
      }
      if (!a) return Interval::from_mpq(mpq_class(st.p, st.q), working);
      const mpz_class p_old = st.p;
      const mpz_class q_old = st.q;
      st.push(*a);
      if (q_old * st.q >= target) {
        return Interval::from_mpq(mpq_class(p_old, q_old), working)
            .hull(Interval::from_mpq(mpq_class(st.p, st.q), working));
      }
    }
  }
  std::string describe() const override { return name_; }

 private:
  std::shared_ptr<Generator> gen_;
  std::size_t digit_cap_;
  std::string name_;
};

}  // namespace

mpz_class checked_pow(const mpz_class& base, const mpz_class& exponent, std::size_t digit_cap) {
  if (exponent < 0) throw DomainError("checked_pow with a negative exponent");
  if (base <= 1 || exponent == 0) {
    return (exponent == 0 || base == 1) ? mpz_class(1) : mpz_class(0);
  }
  // digits(base^e) > e * (bits(base) - 1) * log10(2)
  const mpz_class min_bits = exponent * mpz_class(mpz_sizeinbase(base.get_mpz_t(), 2) - 1);
  const mpz_class cap_bits = mpz_class(static_cast<unsigned long>(digit_cap)) * 3322 / 1000 + 4;
  if (min_bits > cap_bits || !exponent.fits_ulong_p()) {
    throw CapExceeded("power exceeds the quotient digit cap of " + std::to_string(digit_cap));
  }
  mpz_class out;
  mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), exponent.get_ui());
  if (mpz_sizeinbase(out.get_mpz_t(), 10) > digit_cap + 1) {
    throw CapExceeded("power exceeds the quotient digit cap of " + std::to_string(digit_cap));
  }
  return out;
}

// ---------------------------------------------------------------- CFExpansion

CFExpansion::CFExpansion(Kind kind, std::shared_ptr<Generator> generator, std::optional<SurdPeriod> period,
                         RealScalar value)
    : kind_(kind), generator_(std::move(generator)), period_(std::move(period)), value_(std::move(value)) {}

const mpz_class& CFExpansion::a0() const {
  static thread_local mpz_class holder;
  holder = *generator_->get(0);
  return holder;
}

std::optional<mpz_class> CFExpansion::quotient(std::size_t i) const { return generator_->get(i); }

std::vector<mpz_class> CFExpansion::prefix(std::size_t count) const {
  std::vector<mpz_class> out;
  for (std::size_t i = 0; i < count; ++i) {
    auto a = generator_->get(i);
    if (!a) break;
    out.push_back(std::move(*a));
  }
  return out;
}

std::vector<mpz_class> CFExpansion::available_prefix(std::size_t count) const {
  std::vector<mpz_class> out;
  try {
    for (std::size_t i = 0; i < count; ++i) {
      auto a = generator_->get(i);
      if (!a) break;
      out.push_back(std::move(*a));
    }
  } catch (const CapExceeded&) {
  } catch (const PrecisionExhausted&) {
  }
  return out;
}

std::string CFExpansion::to_string(std::size_t depth) const {
  const auto terms = prefix(depth);
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i == 1) os << ';';
    if (i > 1) os << ',';
    os << terms[i].get_str();
  }
  os << ']';
  if (period_) {
    os << " (period: ";
    for (std::size_t i = 0; i < period_->period.size(); ++i) {
      if (i) os << ',';
      os << period_->period[i].get_str();
    }
    os << ')';
  }
  return os.str();
}

// ---------------------------------------------------------------- constructors

CFExpansion cf_from_rational(const mpz_class& p_in, const mpz_class& q_in) {
  if (q_in <= 0) throw DomainError("cf_from_rational requires q > 0");
  if (p_in < 0) throw DomainError("cf_from_rational requires p >= 0");
  mpz_class p = p_in;
  mpz_class q = q_in;
  std::vector<mpz_class> terms;
  while (q != 0) {
    mpz_class a, r;
    mpz_fdiv_qr(a.get_mpz_t(), r.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
    terms.push_back(a);
    p = q;
    q = r;
  }
  // Euclid never ends in 1 except for [1] itself; fold defensively anyway.
  if (terms.size() > 1 && terms.back() == 1) {
    terms.pop_back();
    terms.back() += 1;
  }
  return CFExpansion(CFExpansion::Kind::rational, std::make_shared<FixedGenerator>(terms), std::nullopt,
                     RealScalar::rational(mpq_class(p_in, q_in)));
}

CFExpansion cf_from_surd(const mpz_class& P_in, const mpz_class& Q_in, const mpz_class& D_in) {
  if (Q_in == 0) throw DomainError("surd denominator is zero");
  if (D_in <= 0 || mpz_perfect_square_p(D_in.get_mpz_t())) {
    throw DomainError("surd radicand " + D_in.get_str() + " is not a positive non-square");
  }
  RealScalar value = RealScalar::surd(P_in, Q_in, D_in);
  if (certified_sign_against(value, 0) <= 0) throw DomainError("surd value must be positive");

  mpz_class P = P_in, Q = Q_in, D = D_in;
  if (((D - P * P) % Q) != 0) {
    const mpz_class absQ = abs(Q);
    P *= absQ;
    D *= Q * Q;
    Q *= absQ;
  }
  mpz_class s;
  mpz_sqrt(s.get_mpz_t(), D.get_mpz_t());

  std::vector<mpz_class> terms;
  std::map<std::pair<mpz_class, mpz_class>, std::size_t> seen;
  std::size_t start = 0;
  for (;;) {
    auto key = std::make_pair(P, Q);
    if (auto it = seen.find(key); it != seen.end()) {
      start = it->second;
      break;
    }
    seen.emplace(std::move(key), terms.size());
    mpz_class a;
    const mpz_class top = Q > 0 ? mpz_class(P + s) : mpz_class(P + s + 1);
    mpz_fdiv_q(a.get_mpz_t(), top.get_mpz_t(), Q.get_mpz_t());
    terms.push_back(a);
    P = a * Q - P;
    Q = (D - P * P) / Q;
  }
  SurdPeriod period;
  period.preperiod.assign(terms.begin(), terms.begin() + static_cast<std::ptrdiff_t>(start));
  period.period.assign(terms.begin() + static_cast<std::ptrdiff_t>(start), terms.end());
  auto gen = std::make_shared<PeriodicGenerator>(period);
  return CFExpansion(CFExpansion::Kind::surd, std::move(gen), std::move(period), std::move(value));
}

CFExpansion cf_from_rule(std::vector<mpz_class> seed, QuotientRule rule, std::size_t digit_cap, std::string name) {
  if (seed.empty()) throw DomainError("a rule-generated expansion needs at least a_0");
  if (seed[0] < 0) throw DomainError("a_0 must be nonnegative");
  for (std::size_t i = 1; i < seed.size(); ++i) {
    if (seed[i] < 1) throw DomainError("partial quotients must be positive");
  }
  auto gen = std::make_shared<RuleGenerator>(std::move(seed), std::move(rule), digit_cap);
  RealScalar value = RealScalar::from_source(std::make_shared<CFValueSource>(gen, digit_cap, name));
  return CFExpansion(CFExpansion::Kind::rule, std::move(gen), std::nullopt, std::move(value));
}

CFExpansion cf_from_real(const RealScalar& alpha, std::size_t depth) {
  if (auto v = alpha.exact_value()) return cf_from_rational(v->get_num(), v->get_den());
  if (certified_sign_against(alpha, 0) <= 0) throw DomainError("cf_from_real requires alpha > 0");
  auto gen = std::make_shared<RealGenerator>(alpha);
  CFExpansion cf(CFExpansion::Kind::real, gen, std::nullopt, alpha);
  cf.prefix(depth);
  return cf;
}

CFExpansion cf_e_minus_1() {
  auto rule = [](const RuleContext& ctx) -> mpz_class {
    const std::size_t i = ctx.m + 1;
    if (i % 3 == 2) return mpz_class(static_cast<unsigned long>(2 * (i / 3 + 1)));
    return 1;
  };
  return cf_from_rule({1}, rule, kDefaultDigitCap, "e-1");
}

// ---------------------------------------------------------------- convergents

ConvergentTable convergents(const CFExpansion& cf, std::size_t m_max) {
  ConvergentTable table;
  ConvergentState st;
  for (std::size_t m = 0; m <= m_max; ++m) {
    auto a = cf.quotient(m);
    if (!a) throw DomainError("finite expansion has fewer than " + std::to_string(m_max + 1) + " quotients");
    st.push(*a);
    table.push_back({m, *a, st.p, st.q, st.N});
  }
  return table;
}

namespace {

SecondaryConvergent secondary_at(const ConvergentState& st, long m, const mpz_class& k) {
  if (k == 0) return {st.p, st.q, m, k};
  return {k * st.p + st.p_prev, k * st.q + st.q_prev, m, k};
}

}  // namespace

SecondaryConvergent secondary_convergent(const CFExpansion& cf, const mpz_class& N, bool extend_below_a0) {
  ConvergentState st;
  st.push(*cf.quotient(0));
  if (N < st.N) {
    if (!extend_below_a0 || N < 0) throw DomainError("N = " + N.get_str() + " is below N_0 = a_0");
    return {N, 1, -1, N};
  }
  for (std::size_t m = 0;; ++m) {
    std::optional<mpz_class> next;
    try {
      next = cf.quotient(m + 1);
    } catch (const CapExceeded&) {
      // a_{m+1} > 10^cap; accept when N - N_m is certainly smaller.
      const mpz_class k = N - st.N;
      if (mpz_sizeinbase(k.get_mpz_t(), 10) + 1 < kDefaultDigitCap) {
        return secondary_at(st, static_cast<long>(m), k);
      }
      throw;
    }
    if (!next || N < st.N + *next) {
      const mpz_class k = N - st.N;
      return secondary_at(st, static_cast<long>(m), k);
    }
    st.push(*next);
  }
}

DiophantineDistance diophantine_distance(const RealScalar& alpha, const CFExpansion& cf, const mpz_class& N,
                                         double rel_width, bool extend_below_a0) {
  SecondaryConvergent sc = secondary_convergent(cf, N, extend_below_a0);
  RealScalar dist = eval_linear_form(alpha, sc.p, sc.q, rel_width / 4);
  return {N, sc.p, sc.q, RealScalar::integer(1) / dist};
}

DChainWitness d_chain_check(const RealScalar& alpha, const CFExpansion& cf, std::size_t m) {
  if (m < 1) throw DomainError("d_chain_check requires m >= 1");
  ConvergentTable table = convergents(cf, m);
  auto next = cf.quotient(m + 1);
  if (!next) throw DomainError("expansion ends before a_{m+1}");
  if (*next > 1'000'000) throw DomainError("a_{m+1} too large to walk the chain");
  const mpz_class& Nm = table[m].N;
  std::vector<mpz_class> indices{table[m - 1].N};
  for (mpz_class j = 1; j < *next; ++j) indices.push_back(Nm + j);
  indices.push_back(Nm);

  DChainWitness w{m, {}, true};
  for (const auto& N : indices) w.chain.push_back(diophantine_distance(alpha, cf, N));
  for (std::size_t i = 0; i + 1 < w.chain.size(); ++i) {
    if (certified_compare(w.chain[i].d, w.chain[i + 1].d) >= 0) w.strict = false;
  }
  return w;
}

ConvergentBoundCheck check_convergent_bounds(const RealScalar& alpha, const CFExpansion& cf, std::size_t m) {
  ConvergentTable table = convergents(cf, m);
  auto next = cf.quotient(m + 1);
  if (!next) throw DomainError("expansion ends before a_{m+1}");
  const mpz_class& q = table[m].q;
  DiophantineDistance dd = diophantine_distance(alpha, cf, table[m].N);
  ConvergentBoundCheck out{m, *next * q, dd.d, (*next + 2) * q, true};
  out.holds = certified_sign_against(dd.d, mpq_class(out.lower)) >= 0 &&
              certified_sign_against(dd.d, mpq_class(out.upper)) <= 0;
  return out;
}

}  // namespace dioph
