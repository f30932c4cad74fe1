#include "dioph/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <utility>

#include "dioph/errors.hpp"

namespace dioph {

namespace {

constexpr Precision kSumPrecision = 128;

std::optional<unsigned long> small_integer(const RealScalar& x) {
  auto v = x.exact_value();
  if (!v || v->get_den() != 1 || *v < 0 || !v->get_num().fits_ulong_p()) return std::nullopt;
  return v->get_num().get_ui();
}

// Exponent s carried both as an interval and, when possible, as an integer.
struct Exponent {
  Interval s;
  std::optional<unsigned long> integer;
};

Exponent exponent_at(const RealScalar& s, Precision prec) { return {s.at(prec), small_integer(s)}; }

// n^-s for an integer n >= 1 and s >= 0; decreasing in s.
Interval inv_pow_n(unsigned long n, const Exponent& e, Precision prec) {
  Interval out(prec);
  Float base(prec);
  Float t(prec);
  mpfr_set_ui(base.get(), n, MPFR_RNDN);
  if (e.integer) {
    mpfr_pow_ui(t.get(), base.get(), *e.integer, MPFR_RNDU);
    mpfr_ui_div(out.lo().get(), 1, t.get(), MPFR_RNDD);
    mpfr_pow_ui(t.get(), base.get(), *e.integer, MPFR_RNDD);
    mpfr_ui_div(out.hi().get(), 1, t.get(), MPFR_RNDU);
    return out;
  }
  Float neg(e.s.precision());
  mpfr_neg(neg.get(), e.s.hi().get(), MPFR_RNDN);
  mpfr_pow(out.lo().get(), base.get(), neg.get(), MPFR_RNDD);
  mpfr_neg(neg.get(), e.s.lo().get(), MPFR_RNDN);
  mpfr_pow(out.hi().get(), base.get(), neg.get(), MPFR_RNDU);
  return out;
}

void require_above(const RealScalar& x, long bound, const char* what) {
  if (certified_sign_against(x, bound) <= 0) {
    throw DomainError(std::string(what) + " requires beta > " + std::to_string(bound));
  }
}

// sum_{n > T} n^-s for s > 1 lies in
// [int_{T+1} x^-s dx + (T+1)^-s / 2, int_{T+1/2} x^-s dx].
Interval power_tail(std::uint64_t T, const Interval& s, Precision prec) {
  Interval one = Interval::from_long(1, prec);
  Interval a = Interval::from_mpz(mpz_class(static_cast<unsigned long>(T + 1)), prec);
  Interval mid = Interval::from_mpq(mpq_class(2 * static_cast<unsigned long>(T) + 1, 2), prec);
  Interval sm1 = s - one;
  Interval lower = pow(a, one - s) / sm1 + pow(a, -s) / Interval::from_long(2, prec);
  Interval upper = pow(mid, one - s) / sm1;
  return Interval(lower.lo(), upper.hi());
}

Interval zeta_enclosure(const RealScalar& s, std::uint64_t terms, Precision prec) {
  Exponent e = exponent_at(s, prec);
  if (!e.s.positive() || mpfr_cmp_ui(e.s.lo().get(), 1) <= 0) throw DomainError("zeta requires s > 1");
  Interval sum = Interval::from_long(0, prec);
  // Smallest terms first.
  for (std::uint64_t n = terms; n >= 1; --n) sum += inv_pow_n(n, e, prec);
  return sum + power_tail(terms, e.s, prec);
}

Interval times_ui(const Interval& x, unsigned long k) {
  Interval out(x.precision());
  mpfr_mul_ui(out.lo().get(), x.lo().get(), k, MPFR_RNDD);
  mpfr_mul_ui(out.hi().get(), x.hi().get(), k, MPFR_RNDU);
  return out;
}

Interval log_mpz(const mpz_class& v, Precision prec) { return log(Interval::from_mpz(v, prec)); }

Interval rescale_to(const Interval& per_N, const mpz_class& N, const Scale& scale, Precision prec) {
  return per_N * Interval::from_mpz(N, prec) / scale(N, prec);
}

std::string format_k(double k) {
  std::ostringstream os;
  os << k;
  return os.str();
}

double rel_change(double a, double b) {
  const double den = std::max(std::fabs(a), std::fabs(b));
  return den == 0 ? 0.0 : std::fabs(a - b) / den;
}

}  // namespace

// ---------------------------------------------------------------- zeta and sums

RealScalar zeta(const RealScalar& s, std::uint64_t terms) {
  require_above(s, 1, "zeta");
  return RealScalar::from_cached_function(
      [s, terms](Precision w) { return zeta_enclosure(s, terms, w + 32); }, "zeta(" + s.describe() + ")",
      kSumPrecision);
}

RealScalar zeta_ratio(const RealScalar& beta, std::uint64_t terms) {
  require_above(beta, 2, "zeta ratio");
  // Ratios at exact beta are shared process-wide.
  static std::mutex mutex;
  static std::map<std::pair<std::string, std::uint64_t>, RealScalar> memo;
  const auto exact = beta.exact_value();
  if (exact) {
    std::lock_guard lock(mutex);
    if (auto it = memo.find({exact->get_str(), terms}); it != memo.end()) return it->second;
  }
  const RealScalar s = beta - RealScalar::integer(1);
  RealScalar ratio = RealScalar::from_cached_function(
      [beta, s, terms](Precision w) {
        return zeta_enclosure(s, terms, w + 32) / zeta_enclosure(beta, terms, w + 32);
      },
      "zeta(beta-1)/zeta(beta) at beta=" + beta.describe(), kSumPrecision);
  if (exact) {
    std::lock_guard lock(mutex);
    memo.emplace(std::make_pair(exact->get_str(), terms), ratio);
  }
  return ratio;
}

std::vector<std::uint32_t> totients(std::uint32_t n) {
  std::vector<std::uint32_t> phi(static_cast<std::size_t>(n) + 1);
  std::iota(phi.begin(), phi.end(), 0u);
  for (std::uint32_t p = 2; p <= n; ++p) {
    if (phi[p] != p) continue;
    for (std::uint64_t k = p; k <= n; k += p) phi[k] -= phi[k] / p;
  }
  return phi;
}

RealScalar totient_sum(const RealScalar& beta, std::uint64_t n_max) {
  if (n_max < 1) throw DomainError("totient_sum needs n_max >= 1");
  if (n_max > (std::uint64_t{1} << 31)) throw CapExceeded("totient sieve limited to 2^31");
  auto phi = std::make_shared<std::vector<std::uint32_t>>(totients(static_cast<std::uint32_t>(n_max)));
  return RealScalar::from_cached_function(
      [beta, n_max, phi](Precision w) {
        const Precision prec = w + 32;
        Exponent e = exponent_at(beta, prec);
        Interval sum = Interval::from_long(0, prec);
        for (std::uint64_t n = n_max; n >= 1; --n) sum += times_ui(inv_pow_n(n, e, prec), (*phi)[n]);
        return sum;
      },
      "sum phi(n) n^-beta, n <= " + std::to_string(n_max), kSumPrecision);
}

Interval totient_tail_bound(const RealScalar& beta, std::uint64_t n_max, Precision prec) {
  require_above(beta, 2, "totient tail");
  Interval s = (beta - RealScalar::integer(1)).at(prec);
  Interval tail = power_tail(n_max, s, prec);
  Interval out = Interval::from_long(0, prec);
  mpfr_set(out.hi().get(), tail.hi().get(), MPFR_RNDU);
  return out;
}

std::vector<std::uint64_t> coprime_pair_counts(std::uint32_t cutoff) {
  static std::mutex mu;
  static std::map<std::uint32_t, std::vector<std::uint64_t>> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(cutoff); it != cache.end()) return it->second;
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(cutoff) + 1, 0);
  for (std::uint32_t n = 1; n <= cutoff; ++n) {
    for (std::uint32_t a = 1; a <= n; ++a) {
      if (std::gcd(a, n - a) == 1) ++counts[n];
    }
  }
  cache.emplace(cutoff, counts);
  return counts;
}

RealScalar coprime_pair_sum(const RealScalar& beta, std::uint32_t cutoff) {
  require_above(beta, 2, "coprime pair sum");
  auto counts = std::make_shared<std::vector<std::uint64_t>>(coprime_pair_counts(cutoff));
  return RealScalar::from_cached_function(
      [beta, cutoff, counts](Precision w) {
        const Precision prec = w + 32;
        Exponent e = exponent_at(beta, prec);
        Interval sum = Interval::from_long(0, prec);
        for (std::uint32_t n = cutoff; n >= 1; --n) sum += times_ui(inv_pow_n(n, e, prec), (*counts)[n]);
        Interval tail = totient_tail_bound(beta, cutoff, prec);
        return Interval(sum.lo(), (sum + tail).hi());
      },
      "coprime pair sum, a + b <= " + std::to_string(cutoff), kSumPrecision);
}

// ---------------------------------------------------------------- cones

Cone make_cone(const RealScalar& alpha, const LatticeVector& v1, const LatticeVector& v2) {
  const mpz_class det = v1.p * v2.q - v2.p * v1.q;
  if (det != 1 && det != -1) throw DomainError("cone generators are not unimodular");
  auto side = [&alpha](const LatticeVector& v) {
    if (v.q == 0) return sgn(v.p);
    const int s = certified_sign_against(alpha, mpq_class(v.p, v.q));
    return v.q > 0 ? -s : s;  // sign of p - alpha q
  };
  const int s1 = side(v1);
  const int s2 = side(v2);
  if (s1 == 0 || s2 == 0) throw DomainError("cone generator lies on the line x = alpha y");
  if (s1 != s2) throw DomainError("cone generators straddle the line x = alpha y");
  RealScalar r1 = RealScalar::integer(1) / eval_linear_form(alpha, v1.p, v1.q);
  RealScalar r2 = RealScalar::integer(1) / eval_linear_form(alpha, v2.p, v2.q);
  if (certified_compare(r1, r2) > 0) std::swap(r1, r2);
  return {alpha, v1, v2, r1, r2};
}

ConeBounds cone_bounds(const Cone& cone, const RealScalar& beta) {
  const RealScalar z = zeta_ratio(beta);
  return {pow(cone.d1, beta) * z, pow(cone.d2, beta) * z};
}

ConeSum cone_partial_sum(const Cone& cone, const RealScalar& beta, std::uint32_t cutoff, Precision prec) {
  require_above(beta, 2, "cone sum");
  const Interval a = cone.alpha.at(prec + 32);
  const Interval e1 = mul(a, cone.v1.q) - Interval::from_mpz(cone.v1.p, prec);
  const Interval e2 = mul(a, cone.v2.q) - Interval::from_mpz(cone.v2.p, prec);
  const Interval b = beta.at(prec);
  Interval sum = Interval::from_long(0, prec);
  for (std::uint32_t n = 1; n <= cutoff; ++n) {
    for (std::uint32_t i = 1; i <= n; ++i) {
      const std::uint32_t j = n - i;
      if (std::gcd(i, j) != 1) continue;
      Interval x = mul(e1, mpz_class(i)) + mul(e2, mpz_class(j));
      sum += inv_pow(x, b);
    }
  }
  Interval tail = pow(cone.d2.at(prec), b) * totient_tail_bound(beta, cutoff, prec);
  return {sum, Interval(sum.lo(), (sum + tail).hi())};
}

// ---------------------------------------------------------------- sandwich

namespace {

SandwichBound sandwich_with(const RealScalar& alpha, const CFExpansion& cf, const RealScalar& beta,
                            const RealScalar& zr, const mpz_class& N) {
  if (N < 1) throw DomainError("the sandwich bounds need N >= 1");
  SecondaryConvergent sc = secondary_convergent(cf, N, true);
  RealScalar dN = RealScalar::integer(1) / eval_linear_form(alpha, sc.p, sc.q);
  RealScalar dNm = RealScalar::integer(1);
  if (sc.m >= 0) {
    const mpz_class Nm = N - sc.k;
    dNm = diophantine_distance(alpha, cf, Nm).d;
  }
  const RealScalar n = RealScalar::rational(mpq_class(N));
  SandwichBound b;
  b.N = N;
  b.m = sc.m;
  b.lower = beta * log(dN) / n;
  b.upper = log(zr * n * pow(dNm, beta)) / n;
  return b;
}

bool certify_sandwich(SandwichBound& b, const Interval& value) {
  b.value = value;
  for (Precision w : {Precision{128}, Precision{256}}) {
    Interval lo = b.lower.at(w);
    Interval hi = b.upper.at(w);
    if (mpfr_lessequal_p(lo.hi().get(), value.lo().get()) && mpfr_lessequal_p(value.hi().get(), hi.lo().get())) {
      return b.holds = true;
    }
    if (lo.certainly_greater(value) || value.certainly_greater(hi)) return b.holds = false;
  }
  return b.holds = false;
}

}  // namespace

SandwichBound thm46_bounds(const RealScalar& alpha, const CFExpansion& cf, const RealScalar& beta,
                           const mpz_class& N) {
  require_above(beta, 2, "the sandwich bounds");
  return sandwich_with(alpha, cf, beta, zeta_ratio(beta), N);
}

std::vector<SandwichBound> sandwich_sweep(const RealScalar& alpha, const CFExpansion& cf, const RealScalar& beta,
                                          unsigned N_max, const EngineOptions& opts) {
  require_above(beta, 2, "the sandwich bounds");
  const RealScalar zr = zeta_ratio(beta);
  const auto series = z_diophantine_series(alpha, N_max, beta, opts);
  std::vector<SandwichBound> out;
  for (unsigned N = 1; N <= N_max; ++N) {
    SandwichBound b = sandwich_with(alpha, cf, beta, zr, mpz_class(N));
    const Interval z = series[N].value.enclosure();
    certify_sandwich(b, log(z) / Interval::from_long(N, z.precision()));
    out.push_back(std::move(b));
  }
  return out;
}

// ---------------------------------------------------------------- scales

Scale Scale::power(double k) {
  if (!(k >= 1)) throw DomainError("power scales need k >= 1");
  const std::string tag = "N^" + format_k(k);
  if (k == 1) return Scale(tag, [](const mpz_class& N, Precision prec) { return Interval::from_mpz(N, prec); });
  return Scale(tag, [k](const mpz_class& N, Precision prec) {
    return pow(Interval::from_mpz(N, prec), Interval::from_double(k, prec));
  });
}

Scale Scale::sqrtN_logN() {
  return Scale("sqrtN_logN", [](const mpz_class& N, Precision prec) {
    Interval n = Interval::from_mpz(N, prec);
    return sqrt(n) * log(n);
  });
}

Scale Scale::custom(std::string tag, std::function<Interval(const mpz_class&, Precision)> fn) {
  return Scale(std::move(tag), std::move(fn));
}

Scale Scale::parse(const std::string& text) {
  if (text == "N") return power(1);
  if (text == "sqrtN_logN") return sqrtN_logN();
  if (text.rfind("N^", 0) == 0) {
    try {
      std::size_t used = 0;
      const double k = std::stod(text.substr(2), &used);
      if (used == text.size() - 2) return power(k);
    } catch (const std::exception&) {
    }
  }
  throw ParseError("unknown scale: " + text);
}

std::vector<Scale> default_scales() {
  return {Scale::power(1), Scale::power(1.25), Scale::power(1.5), Scale::power(2), Scale::sqrtN_logN()};
}

FreeEnergySeries free_energy_series(const RealScalar& alpha, const CFExpansion& cf, const RealScalar& beta,
                                    const std::vector<unsigned>& N_list, const Scale& scale,
                                    const EngineOptions& opts, unsigned cap) {
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    if (N_list[i] < 1) throw DomainError("free-energy series start at N = 1");
    if (i && N_list[i] <= N_list[i - 1]) throw DomainError("N values must be strictly increasing");
  }
  FreeEnergySeries out{alpha.describe(), beta, scale.tag(), {}};
  unsigned enumerate_to = 0;
  for (unsigned N : N_list) {
    if (N <= cap) enumerate_to = N;
  }
  std::vector<PartitionResult> series;
  if (enumerate_to) series = z_diophantine_series(alpha, enumerate_to, beta, opts, cap);
  std::optional<RealScalar> zr;
  for (unsigned N : N_list) {
    const mpz_class n(N);
    if (N <= cap) {
      const Interval z = series[N].value.enclosure();
      out.points.push_back({n, log(z) / scale(n, kSumPrecision), false});
    } else {
      if (!zr) zr = zeta_ratio(beta);
      SandwichBound b = sandwich_with(alpha, cf, beta, *zr, n);
      Interval hull(b.lower.at(kSumPrecision).lo(), b.upper.at(kSumPrecision).hi());
      out.points.push_back({n, rescale_to(hull, n, scale, kSumPrecision), true});
    }
  }
  return out;
}

// ---------------------------------------------------------------- convergent estimator

LimitEstimate convergent_limit_estimate(const CFExpansion& cf, const Scale& scale, std::size_t m_max,
                                        Precision prec) {
  LimitEstimate out;
  out.scale_tag = scale.tag();
  mpz_class q = 0, q_prev = 1, N = 0;
  std::vector<Interval> scales;
  const std::size_t period = cf.period() ? cf.period()->period.size() : 0;
  for (std::size_t m = 0; m <= m_max; ++m) {
    std::optional<mpz_class> a;
    try {
      a = cf.quotient(m);
    } catch (const CapExceeded&) {
      out.capped = true;
      break;
    }
    if (!a) break;
    mpz_class q_next = *a * q + q_prev;
    q_prev = std::move(q);
    q = std::move(q_next);
    N += *a;

    LimitPoint pt;
    pt.m = m;
    pt.N = N;
    pt.log_q = log_mpz(q, prec);
    const Interval s = N > 0 ? scale(N, prec) : Interval::from_long(0, prec);
    scales.push_back(s);
    pt.raw = pt.log_q / s;
    const std::size_t w = period ? period : std::max<std::size_t>(1, (m + 1) / 2);
    pt.window = w;
    if (m >= w) {
      const LimitPoint& back = out.points[m - w];
      Interval ds = s - scales[m - w];
      if (ds.positive()) pt.increment = (pt.log_q - back.log_q) / ds;
    }
    out.points.push_back(std::move(pt));
  }
  return out;
}

RealScalar quad_free_energy(const CFExpansion& cf) {
  if (!cf.period()) throw DomainError("quad_free_energy needs a periodic expansion");
  IntMat2 C;
  mpz_class c_sum = 0;
  for (const auto& c : cf.period()->period) {
    C = mat_mul(C, IntMat2{0, 1, 1, c});
    c_sum += c;
  }
  const mpz_class tr = C.a + C.d;
  const mpz_class det = C.det();
  const mpz_class disc = tr * tr - 4 * det;
  return RealScalar::from_function(
      [tr, disc, c_sum](Precision w) {
        const Precision prec = w + 16;
        Interval lambda = (Interval::from_mpz(tr, prec) + sqrt(Interval::from_mpz(disc, prec))) /
                          Interval::from_long(2, prec);
        return log(lambda) / Interval::from_mpz(c_sum, prec);
      },
      "log(lambda_max)/" + c_sum.get_str());
}

// ---------------------------------------------------------------- constructions

Construction construct_thm42(std::size_t digit_cap) {
  auto rule = [](const RuleContext& ctx) {
    return checked_pow(ctx.q, mpz_class(static_cast<unsigned long>(ctx.m)), ctx.digit_cap);
  };
  return {"thm42", cf_from_rule({1, 2}, rule, digit_cap, "thm42"), Construction::Exponent::index};
}

Construction construct_thm43(std::size_t digit_cap) {
  auto rule = [](const RuleContext& ctx) { return checked_pow(ctx.q, ctx.N, ctx.digit_cap); };
  return {"thm43", cf_from_rule({1}, rule, digit_cap, "thm43"), Construction::Exponent::checkpoint};
}

std::vector<DiagnosticPoint> construction_diagnostic(const Construction& c, const RealScalar& beta,
                                                     std::size_t from_m, std::size_t m_max) {
  const Precision prec = 256;
  const Interval b = beta.at(prec);
  const Interval one = Interval::from_long(1, prec);
  std::vector<DiagnosticPoint> out;
  mpz_class q = 0, q_prev = 1, N = 0;
  for (std::size_t m = 0; m <= m_max; ++m) {
    std::optional<mpz_class> a;
    try {
      a = c.cf.quotient(m);
    } catch (const CapExceeded&) {
      if (m == 0 || m - 1 < from_m - 1) break;
      // a_m = q_{N_{m-1}}^{f(m-1)} is too large to write down; only its
      // logarithm is used, and q_{N_m} lies in [a_m q, (a_m + 1) q].
      const Interval log_q_prev = log_mpz(q, prec);
      const Interval log_a = mul(log_q_prev, c.f(m - 1, N));
      Float eps(prec);
      mpfr_set_ui_2exp(eps.get(), 1, -static_cast<long>(prec) + 8, MPFR_RNDU);
      Interval slack(prec);
      mpfr_set_ui(slack.lo().get(), 0, MPFR_RNDD);
      mpfr_set(slack.hi().get(), eps.get(), MPFR_RNDU);
      const Interval log_q = log_a + log_q_prev + slack;
      // (f(m) + 1) / N_m with N_m = N_{m-1} + a_m.
      Interval ratio = one + slack;
      if (c.exponent == Construction::Exponent::index) {
        ratio = exp(log(Interval::from_long(static_cast<long>(m) + 1, prec)) - log_a) * (one - slack).hull(one);
      }
      out.push_back({m, b * ratio * log_q, true});
      break;
    }
    if (!a) break;
    mpz_class q_next = *a * q + q_prev;
    q_prev = std::move(q);
    q = std::move(q_next);
    N += *a;
    if (m >= from_m) {
      const Interval f1 = Interval::from_mpz(c.f(m, N) + 1, prec);
      out.push_back({m, b * f1 * log_mpz(q, prec) / Interval::from_mpz(N, prec), false});
    }
  }
  return out;
}

bool strictly_decreasing(const std::vector<DiagnosticPoint>& pts) {
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!pts[i + 1].value.certainly_less(pts[i].value)) return false;
  }
  return pts.size() >= 2;
}

bool strictly_increasing(const std::vector<DiagnosticPoint>& pts) {
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!pts[i].value.certainly_less(pts[i + 1].value)) return false;
  }
  return pts.size() >= 2;
}

// ---------------------------------------------------------------- classification

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::supported: return "supported";
    case Verdict::refuted: return "refuted";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string to_string(Trend t) {
  switch (t) {
    case Trend::stable: return "stable";
    case Trend::decaying: return "decaying";
    case Trend::diverging: return "diverging";
    case Trend::unknown: return "unknown";
  }
  return "unknown";
}

namespace {

// Increment estimator where available, else the raw ratio.
std::vector<std::pair<std::size_t, Interval>> estimator_values(const LimitEstimate& est) {
  std::vector<std::pair<std::size_t, Interval>> out;
  for (const auto& p : est.points) {
    const Interval& v = p.increment ? *p.increment : p.raw;
    if (v.is_finite()) out.emplace_back(p.m, v);
  }
  return out;
}

ScaleFinding assess(const LimitEstimate& est, std::size_t window, double tolerance) {
  ScaleFinding f;
  f.scale_tag = est.scale_tag;
  const auto vals = estimator_values(est);
  if (vals.size() < window + 1 || vals.size() < 4) return f;
  f.m_last = vals.back().first;
  const std::size_t start = vals.size() - window;
  Interval hull = vals[start].second;
  for (std::size_t i = start; i < vals.size(); ++i) {
    hull = hull.hull(vals[i].second);
    if (i > start) {
      f.max_rel_change =
          std::max(f.max_rel_change, rel_change(vals[i].second.mid_double(), vals[i - 1].second.mid_double()));
    }
  }
  f.cauchy = f.max_rel_change < tolerance;
  // Widen the window hull by its largest successive change.
  const double spread = f.max_rel_change * std::fabs(vals.back().second.mid_double());
  Interval pad = Interval::from_double(spread, hull.precision());
  f.limit_window = Interval(hull.lo(), hull.hi()) + Interval((-pad).lo(), pad.hi());

  const double last = vals.back().second.mid_double();
  const std::size_t half_m = f.m_last / 2;
  double half = 0;
  for (const auto& [m, v] : vals) {
    if (m <= half_m) half = v.mid_double();
  }
  f.doubling_ratio = half != 0 ? last / half : 0;
  if (f.doubling_ratio > 0 && f.doubling_ratio < 0.9) {
    f.trend = Trend::decaying;
  } else if (f.doubling_ratio > 1.1) {
    f.trend = Trend::diverging;
  } else if (f.cauchy) {
    f.trend = Trend::stable;
  }
  return f;
}

std::string describe_interval(const Interval& x) {
  return "[" + x.lo().to_string(10, MPFR_RNDD) + ", " + x.hi().to_string(10, MPFR_RNDU) + "]";
}

}  // namespace

ClassificationReport classify(const std::string& alpha_name, const RealScalar& alpha, const CFExpansion& cf,
                              const RealScalar& beta, const ClassifyBudget& budget,
                              const Construction* construction) {
  require_above(beta, 2, "classify");
  ClassificationReport r;
  r.alpha = alpha_name;
  r.beta = beta;

  std::vector<Scale> scales{Scale::power(1)};
  for (double k : budget.k_grid) scales.push_back(Scale::power(k));
  scales.push_back(Scale::sqrtN_logN());
  for (const auto& s : scales) {
    r.scales.push_back(assess(convergent_limit_estimate(cf, s, budget.m_max), budget.window, budget.tolerance));
  }
  for (const auto& f : r.scales) {
    if (f.trend == Trend::stable) {
      r.fitted_scale = f.scale_tag;
      break;
    }
  }

  const ScaleFinding& one = r.scales.front();
  if (construction) {
    r.diagnostic = construction_diagnostic(*construction, beta);
    const auto& d = r.diagnostic;
    if (construction->exponent == Construction::Exponent::index && strictly_decreasing(d) &&
        d.back().value.hi_double() < d.front().value.lo_double() / 100) {
      r.one_free_energy = Verdict::supported;
      r.one_free_energy_evidence = "diagnostic strictly decreasing to " + describe_interval(d.back().value) +
                                   " at m=" + std::to_string(d.back().m) + "; limit 0";
    } else if (construction->exponent == Construction::Exponent::checkpoint && strictly_increasing(d) &&
               d.back().value.lo_double() >= 10 * d.front().value.hi_double()) {
      r.one_free_energy = Verdict::refuted;
      r.one_free_energy_evidence = "refuted (unbounded subsequence witness): diagnostic strictly increasing to " +
                                   describe_interval(d.back().value) + " at m=" + std::to_string(d.back().m);
    } else {
      r.one_free_energy_evidence = "diagnostic not monotone over the available prefix";
    }
  } else if (one.trend == Trend::stable) {
    r.one_free_energy = Verdict::supported;
    r.free_energy_window = one.limit_window * beta.at(128);
    r.one_free_energy_evidence = "N^1 estimator stable (max relative change " + std::to_string(one.max_rel_change) +
                                 " over " + std::to_string(budget.window) + " checkpoints to m=" +
                                 std::to_string(one.m_last) + "); limit window " +
                                 describe_interval(one.limit_window);
  } else if (one.trend == Trend::decaying) {
    r.one_free_energy = Verdict::supported;
    r.one_free_energy_evidence = "N^1 estimator decays (doubling ratio " + std::to_string(one.doubling_ratio) +
                                 "); limit 0";
  } else if (one.trend == Trend::diverging) {
    r.one_free_energy = Verdict::refuted;
    r.one_free_energy_evidence = "N^1 estimator grows (doubling ratio " + std::to_string(one.doubling_ratio) + ")";
  } else {
    r.one_free_energy_evidence = "N^1 estimator neither stable nor trending at m=" + std::to_string(one.m_last);
  }

  bool all_decay = true;
  bool any_nonzero = false;
  std::string ev;
  for (std::size_t i = 1; i + 1 < r.scales.size(); ++i) {
    const auto& f = r.scales[i];
    all_decay = all_decay && f.trend == Trend::decaying;
    any_nonzero = any_nonzero || f.trend == Trend::stable || f.trend == Trend::diverging;
    ev += (ev.empty() ? "" : "; ") + f.scale_tag + ": " + to_string(f.trend) + " (doubling ratio " +
          std::to_string(f.doubling_ratio) + ")";
  }
  r.k_free_energy_zero = all_decay ? Verdict::supported : (any_nonzero ? Verdict::refuted : Verdict::inconclusive);
  r.k_free_energy_evidence = ev;

  if (budget.enumerate_N > 0) {
    r.sandwich = sandwich_sweep(alpha, cf, beta, budget.enumerate_N, budget.engine);
    for (const auto& s : r.sandwich) r.sandwich_holds = r.sandwich_holds && s.holds;
  }
  return r;
}

}  // namespace dioph
