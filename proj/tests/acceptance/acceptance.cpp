// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria. Pass criterion numbers as arguments to run a
// subset.

#include <gmpxx.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dioph/analysis.hpp"
#include "dioph/contfrac.hpp"
#include "dioph/farey.hpp"
#include "dioph/partition.hpp"
#include "dioph_cli/alpha.hpp"
#include "dioph_cli/cli.hpp"

using namespace dioph;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failed sub-checks; the first few are kept for the report line.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++total_;
    if (ok) return;
    ++failed_;
    if (failed_ <= 3) failures_.push_back(what);
  }
  void note(const std::string& s) { notes_.push_back(s); }

  Outcome outcome() const {
    Outcome o;
    o.pass = failed_ == 0;
    std::ostringstream ss;
    ss << (total_ - failed_) << "/" << total_ << " checks";
    for (const auto& n : notes_) ss << "; " << n;
    for (const auto& f : failures_) ss << "; failed: " << f;
    if (failed_ > 3) ss << "; +" << (failed_ - 3) << " more";
    o.detail = ss.str();
    return o;
  }

 private:
  long total_ = 0;
  long failed_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(double v, int digits = 7) {
  std::ostringstream ss;
  ss.precision(digits);
  ss << v;
  return ss.str();
}

// Midpoint in scientific notation; survives values far below double range.
std::string sci(const Interval& x) {
  mpfr_t m;
  mpfr_init2(m, 64);
  mpfr_add(m, x.lo().get(), x.hi().get(), MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  char buf[64];
  mpfr_snprintf(buf, sizeof buf, "%.4Rg", m);
  mpfr_clear(m);
  return buf;
}

struct Named {
  std::string name;
  RealScalar value;
  CFExpansion cf;
};

std::vector<Named> test_alphas() {
  const RealScalar pi = cli::pi_literal();
  return {
      {"golden", RealScalar::surd(1, 2, 5), cf_from_surd(1, 2, 5)},
      {"sqrt2", RealScalar::surd(0, 1, 2), cf_from_surd(0, 1, 2)},
      {"sqrt3", RealScalar::surd(0, 1, 3), cf_from_surd(0, 1, 3)},
      {"e_minus_1", cf_e_minus_1().value(), cf_e_minus_1()},
      {"pi_literal", pi, cf_from_real(pi, 64)},
  };
}

std::string cli_output(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != 0) return "exit " + std::to_string(code) + ": " + err.str();
  return out.str();
}

// Zeta via direct sum plus Euler-Maclaurin tail, in long double.
long double zeta_oracle(long double s) {
  const long K = 20000;
  long double sum = 0;
  for (long n = K; n >= 1; --n) sum += std::pow(static_cast<long double>(n), -s);
  const long double k = K;
  return sum + std::pow(k, 1 - s) / (s - 1) - std::pow(k, -s) / 2 + s * std::pow(k, -s - 1) / 12;
}

Outcome farey_structure() {
  Checker c;
  for (unsigned n = 0; n <= 15; ++n) {
    const auto set = farey_set(n);
    c.expect(set.size() == (std::size_t{1} << n) + 1, "|F_" + std::to_string(n) + "|");
    bool unimodular = true;
    for (std::size_t i = 0; i + 1 < set.size(); ++i) {
      const mpz_class det = set[i].num() * set[i + 1].den() - set[i + 1].num() * set[i].den();
      unimodular = unimodular && abs(det) == 1;
    }
    c.expect(unimodular, "adjacent unimodularity in F_" + std::to_string(n));

    std::set<std::pair<std::string, std::string>> cols;
    std::size_t count = 0;
    for (const auto& f : right_columns(n)) {
      cols.insert({f.num().get_str(), f.den().get_str()});
      ++count;
    }
    c.expect(cols.size() == count, "duplicate right columns at N=" + std::to_string(n));
    cols.insert({"1", "0"});
    std::set<std::pair<std::string, std::string>> want;
    for (const auto& f : set) want.insert({f.num().get_str(), f.den().get_str()});
    c.expect(cols == want && want.size() == set.size(), "right columns vs F_" + std::to_string(n));
  }
  return c.outcome();
}

Outcome last_letter_split() {
  Checker c;
  std::mt19937_64 rng(2024);
  auto pick = [&rng](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  long exact_cases = 0;
  for (unsigned k : {2u, 3u}) {
    for (unsigned N = 1; N <= 10; ++N) {
      for (long beta : {2L, 4L}) {
        PartitionSpec spec;
        spec.N = N;
        spec.beta = RealScalar::integer(beta);
        spec.M = {RealScalar::rational(mpq_class(pick(1, 5), pick(1, 3))), RealScalar::integer(pick(0, 4)),
                  RealScalar::integer(pick(0, 4)), RealScalar::integer(pick(1, 4))};
        spec.alphabet = {IntMat2::A0(), IntMat2::A1()};
        if (k == 3) spec.alphabet.push_back(IntMat2{pick(1, 3), pick(0, 3), pick(0, 3), pick(1, 3)});
        const auto r = lemma31_split(spec);
        const std::string tag = "k=" + std::to_string(k) + " N=" + std::to_string(N) + " beta=" + std::to_string(beta);
        c.expect(r.whole_exact.has_value() && r.parts_exact.has_value(), "exact values for " + tag);
        c.expect(r.exact_equal, "exact equality for " + tag);
        ++exact_cases;
      }
    }
  }
  long irrational_cases = 0;
  for (const auto& alpha : {RealScalar::surd(1, 2, 5), RealScalar::surd(0, 1, 2), RealScalar::surd(0, 1, 7)}) {
    for (unsigned N = 1; N <= 10; ++N) {
      for (const auto& beta : {RealScalar::integer(2), RealScalar::rational(mpq_class(5, 2))}) {
        PartitionSpec spec;
        spec.N = N;
        spec.M = WeightMatrix::diophantine(alpha);
        spec.beta = beta;
        c.expect(lemma31_split(spec).intersects, "intersection for " + alpha.describe() + " N=" + std::to_string(N));
        ++irrational_cases;
      }
    }
  }
  c.note(std::to_string(exact_cases) + " exact and " + std::to_string(irrational_cases) + " interval cases");
  return c.outcome();
}

Outcome zeta_triangle() {
  Checker c;
  for (const mpq_class& b : {mpq_class(5, 2), mpq_class(3), mpq_class(4), mpq_class(6)}) {
    const RealScalar beta = RealScalar::rational(b);
    const std::string tag = "beta=" + fmt(b.get_d());
    const Interval ratio = zeta_ratio(beta).enclosure();
    const Interval ts = totient_sum(beta, 100'000).enclosure();
    const Interval tail = totient_tail_bound(beta, 100'000);
    const Interval cps = coprime_pair_sum(beta, 10'000).enclosure();

    c.expect(ts.lo_double() <= ratio.hi_double(), "totient partial sum below ratio, " + tag);
    c.expect(ratio.lo_double() <= ts.hi_double() + tail.hi_double(), "ratio within totient tail, " + tag);
    c.expect(cps.intersects(ratio), "coprime pair sum vs ratio, " + tag);
    c.expect(cps.lo_double() <= ts.hi_double() + tail.hi_double() && ts.lo_double() <= cps.hi_double(),
             "coprime pair sum vs totient sum, " + tag);

    const long double s = b.get_d();
    const long double oracle = zeta_oracle(s - 1) / zeta_oracle(s);
    c.expect(std::fabs(static_cast<long double>(ratio.mid_double()) - oracle) < 1e-9L * oracle,
             "zeta ratio vs oracle, " + tag);
  }
  const Interval t4 = totient_sum(RealScalar::integer(4), 10'000).enclosure();
  const long double oracle4 = zeta_oracle(3) / zeta_oracle(4);
  c.expect(std::fabs(t4.mid_double() - 1.11063) < 1e-3, "totient_sum(4, 1e4) vs 1.11063");
  c.expect(std::fabs(t4.mid_double() - static_cast<double>(oracle4)) < 1e-3, "totient_sum(4, 1e4) vs oracle");
  c.note("totient_sum(4,1e4) = " + fmt(t4.mid_double(), 9) + ", oracle ratio " + fmt(static_cast<double>(oracle4), 9));
  return c.outcome();
}

Outcome sandwich() {
  Checker c;
  long points = 0;
  for (const auto& a : test_alphas()) {
    for (long beta : {3L, 4L}) {
      const auto sweep = sandwich_sweep(a.value, a.cf, RealScalar::integer(beta), 20);
      c.expect(sweep.size() == 20, a.name + " sweep length");
      for (const auto& b : sweep) {
        ++points;
        bool ok = b.value.has_value();
        if (ok) {
          ok = b.lower.enclosure().lo_double() <= b.value->hi_double() &&
               b.value->lo_double() <= b.upper.enclosure().hi_double() && b.holds;
        }
        c.expect(ok, a.name + " beta=" + std::to_string(beta) + " N=" + b.N.get_str());
      }
    }
  }
  c.note(std::to_string(points) + " (alpha, beta, N) points");
  return c.outcome();
}

Outcome chains_and_bounds() {
  Checker c;
  for (const auto& a : test_alphas()) {
    for (std::size_t m = 0; m <= 15; ++m) {
      if (m >= 1) c.expect(d_chain_check(a.value, a.cf, m).strict, a.name + " chain m=" + std::to_string(m));
      c.expect(check_convergent_bounds(a.value, a.cf, m).holds, a.name + " bounds m=" + std::to_string(m));
    }
  }
  return c.outcome();
}

Outcome golden_free_energy() {
  Checker c;
  const double log_phi = std::log((1 + std::sqrt(5.0)) / 2);
  const auto cf = cf_from_surd(1, 2, 5);
  const auto est = convergent_limit_estimate(cf, Scale::power(1), 40);

  // Fibonacci oracle for q_m and the increment.
  unsigned long long f0 = 1, f1 = 1;
  bool fib = true;
  for (std::size_t m = 0; m <= 40; ++m) {
    fib = fib && std::fabs(est.points[m].log_q.mid_double() - std::log(static_cast<double>(f0))) < 1e-12;
    const unsigned long long next = f0 + f1;
    f0 = f1;
    f1 = next;
  }
  c.expect(fib, "log q_m matches Fibonacci");
  const auto& last = est.points[40];
  c.expect(last.increment.has_value(), "increment estimate at m=40");
  if (last.increment) {
    const double err = std::fabs(last.increment->mid_double() - log_phi);
    c.expect(err < 1e-4, "increment within 1e-4 of log phi");
    c.note("estimate(40) - log phi = " + fmt(last.increment->mid_double() - log_phi, 3));
  }

  const RealScalar phi = RealScalar::surd(1, 2, 5);
  std::vector<unsigned> Ns(20);
  std::iota(Ns.begin(), Ns.end(), 1u);
  const auto series = free_energy_series(phi, cf, RealScalar::integer(3), Ns, Scale::power(1));
  c.expect(series.points.size() == 20, "enumerated series length");
  std::vector<double> v;
  for (const auto& p : series.points) v.push_back(p.enclosure.mid_double());
  bool settling = true;
  for (std::size_t i = 15; i + 1 < v.size(); ++i) {
    settling = settling && std::fabs(v[i + 1] - v[i]) <= std::fabs(v[i] - v[i - 1]);
  }
  c.expect(settling, "successive changes of log Z_N / N shrink over N = 15..20");
  Interval window = series.points[15].enclosure;
  for (std::size_t i = 16; i < series.points.size(); ++i) window = window.hull(series.points[i].enclosure);
  c.note("beta=3 window N=16..20 [" + fmt(window.lo_double()) + ", " + fmt(window.hi_double()) + "]");
  c.note("distance to log phi " + fmt(window.mid_double() - log_phi, 4) + ", to 3 log phi " +
         fmt(window.mid_double() - 3 * log_phi, 4));
  return c.outcome();
}

Outcome quadratic_irrationals() {
  Checker c;
  auto compare = [&c](const CFExpansion& cf, const std::string& tag, std::optional<double> closed) {
    const double q = quad_free_energy(cf).enclosure().mid_double();
    const auto est = convergent_limit_estimate(cf, Scale::power(1), 200);
    const auto& inc = est.points.back().increment;
    c.expect(inc.has_value(), tag + " estimator at depth 200");
    if (inc) c.expect(std::fabs(inc->mid_double() - q) <= 1e-3 * std::fabs(q), tag + " quad_free_energy vs estimator");
    if (closed) c.expect(std::fabs(q - *closed) < 1e-12, tag + " closed form");
  };
  compare(cf_from_surd(0, 1, 2), "sqrt2", 0.5 * std::log(1 + std::sqrt(2.0)));

  std::mt19937_64 rng(7);
  int done = 0;
  while (done < 10) {
    const long D = std::uniform_int_distribution<long>(2, 999)(rng);
    const long r = std::lround(std::sqrt(static_cast<double>(D)));
    if (r * r == D) continue;
    const long P = std::uniform_int_distribution<long>(-5, 5)(rng);
    const long Q = (D - P * P) % 2 == 0 ? 2 : 1;
    compare(cf_from_surd(P, Q, D), "(" + std::to_string(P) + "+sqrt" + std::to_string(D) + ")/" + std::to_string(Q),
            std::nullopt);
    ++done;
  }
  c.note("sqrt2 plus 10 random surds");
  return c.outcome();
}

Outcome constructions() {
  Checker c;
  const RealScalar beta = RealScalar::integer(3);
  const auto d42 = construction_diagnostic(construct_thm42(), beta);
  const auto d43 = construction_diagnostic(construct_thm43(), beta);
  c.expect(d42.size() >= 3 && strictly_decreasing(d42), "thm42 strictly decreasing");
  if (!d42.empty()) {
    c.expect(d42.back().value.hi_double() < 1e-6 * d42.front().value.lo_double(), "thm42 tends to 0");
    c.note("thm42 m=" + std::to_string(d42.front().m) + ".." + std::to_string(d42.back().m) + " from " +
           sci(d42.front().value) + " to " + sci(d42.back().value));
  }
  c.expect(d43.size() >= 3 && strictly_increasing(d43), "thm43 strictly increasing");
  if (!d43.empty()) {
    c.expect(d43.back().value.lo_double() > 10 * d43.front().value.hi_double(), "thm43 exceeds 10x its first value");
    c.note("thm43 m=" + std::to_string(d43.front().m) + ".." + std::to_string(d43.back().m) + " from " +
           sci(d43.front().value) + " to " + sci(d43.back().value));
  }
  return c.outcome();
}

Outcome e_minus_1_scaling() {
  Checker c;
  const auto cf = cf_e_minus_1();
  const auto slow = convergent_limit_estimate(cf, Scale::sqrtN_logN(), 400);
  const auto linear = convergent_limit_estimate(cf, Scale::power(1), 400);
  c.expect(slow.points.size() == 401 && linear.points.size() == 401, "depth 400 reached");
  if (slow.points.size() != 401 || linear.points.size() != 401) return c.outcome();

  // Independent recurrence on the quotient pattern 1, 1, 2k.
  mpz_class q = 0, q_prev = 1;
  bool recurrence = true;
  for (std::size_t m = 0; m <= 400; ++m) {
    const unsigned long a = m == 0 ? 1 : (m % 3 == 2 ? 2 * (m + 1) / 3 : 1);
    const mpz_class next = a * q + q_prev;
    q_prev = q;
    q = next;
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, q.get_mpz_t());
    const double log_q = std::log(mant) + static_cast<double>(exp) * std::log(2.0);
    recurrence = recurrence && std::fabs(slow.points[m].log_q.mid_double() - log_q) < 1e-9 * std::max(1.0, log_q);
  }
  c.expect(recurrence, "log q_{N_m} matches the quotient recurrence");

  const std::size_t W = 20;
  auto window_mean = [](const LimitEstimate& e, std::size_t end, std::size_t w) {
    double s = 0;
    for (std::size_t m = end + 1 - w; m <= end; ++m) s += e.points[m].raw.mid_double();
    return s / static_cast<double>(w);
  };
  double worst = 0;
  for (std::size_t end = 200 + W; end <= 400; end += W) {
    const double a = window_mean(slow, end - W, W), b = window_mean(slow, end, W);
    worst = std::max(worst, std::fabs(b - a) / std::fabs(b));
  }
  c.expect(worst < 0.05, "sqrtN_logN successive-window change < 5%");
  c.note("sqrtN_logN worst window change " + fmt(100 * worst, 3) + "%");

  bool grows = true;
  for (std::size_t m = 201; m <= 400; ++m) {
    grows = grows && linear.points[m].raw.mid_double() > linear.points[m - 1].raw.mid_double();
  }
  c.expect(grows, "N^1 sequence grows monotonically on m = 200..400");
  c.note("N^1 raw goes " + fmt(linear.points[200].raw.mid_double(), 4) + " -> " +
         fmt(linear.points[400].raw.mid_double(), 4));
  return c.outcome();
}

Outcome determinism() {
  Checker c;
  std::vector<std::vector<std::string>> jobs;
  for (const std::string& alpha : {"golden", "e_minus_1", "pi_literal"}) {
    jobs.push_back({"--format", "csv", "free-energy", "--named", alpha, "--beta", "3", "--N", "1..20"});
  }
  jobs.push_back({"--format", "csv", "free-energy", "--surd", "0,1,2", "--beta", "4", "--N", "1..20"});
  jobs.push_back({"--format", "csv", "free-energy", "--named", "golden", "--beta", "3", "--scale", "N", "--m", "40"});
  jobs.push_back(
      {"--format", "csv", "free-energy", "--named", "e_minus_1", "--beta", "3", "--scale", "sqrtN_logN", "--m", "400"});
  jobs.push_back({"--format", "csv", "free-energy", "--named", "e_minus_1", "--beta", "3", "--scale", "N", "--m", "400"});
  for (const auto& job : jobs) {
    auto with = [&job](const char* threads) {
      std::vector<std::string> args{"--threads", threads};
      args.insert(args.end(), job.begin(), job.end());
      return cli_output(args);
    };
    const std::string one = with("1");
    std::string tag;
    for (std::size_t i = 2; i < job.size(); ++i) tag += (i > 2 ? " " : "") + job[i];
    c.expect(one.rfind("exit", 0) != 0 && !one.empty(), "csv produced for " + tag);
    c.expect(one == with("1"), "repeat run identical for " + tag);
    c.expect(one == with("8"), "8 threads identical for " + tag);
  }
  return c.outcome();
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "Farey structure", 10, farey_structure},
      {2, "last-letter split", 30, last_letter_split},
      {3, "zeta-ratio triangle", 60, zeta_triangle},
      {4, "free-energy sandwich", 600, sandwich},
      {5, "d-chain and convergent bounds", 30, chains_and_bounds},
      {6, "golden ratio free energy", 300, golden_free_energy},
      {7, "quadratic irrationals", 60, quadratic_irrationals},
      {8, "constructions", 120, constructions},
      {9, "e-1 scaling", 60, e_minus_1_scaling},
      {10, "determinism", 0, determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& crit : all) {
    if (!selected.empty() && !selected.count(crit.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = crit.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (crit.budget_s > 0 && secs > crit.budget_s) {
      o.pass = false;
      o.detail += "; over the " + fmt(crit.budget_s) + " s budget";
    }
    if (!o.pass) ++failures;
    std::printf("criterion %2d %s  %-30s %8.2f s  %s\n", crit.id, o.pass ? "PASS" : "FAIL", crit.name, secs,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
