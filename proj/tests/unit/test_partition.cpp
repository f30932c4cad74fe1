#include <doctest.h>

#include <cmath>
#include <vector>

#include "dioph/errors.hpp"
#include "dioph/farey.hpp"
#include "dioph/partition.hpp"
#include "support.hpp"

using namespace dioph;
using test_support::Gen;

namespace {

struct Mat {
  long double a, b, c, d;
};

Mat mul(const Mat& x, const Mat& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

// Sum over all 2^N words of |m . (prefix w)|^-beta with plain long doubles.
long double brute(const Mat& weight, const Mat& prefix, unsigned N, long double beta) {
  const Mat letters[2] = {{1, 0, 1, 1}, {1, 1, 0, 1}};
  long double total = 0;
  for (unsigned long code = 0; code < (1UL << N); ++code) {
    Mat w = prefix;
    for (unsigned i = 0; i < N; ++i) w = mul(w, letters[(code >> (N - 1 - i)) & 1]);
    const long double hs = weight.a * w.a + weight.b * w.b + weight.c * w.c + weight.d * w.d;
    total += std::pow(std::fabs(hs), -beta);
  }
  return total;
}

const Mat kIdentity{1, 0, 0, 1};
const Mat kA0{1, 0, 1, 1};

bool same_enclosure(const Interval& x, const Interval& y) {
  return mpfr_equal_p(x.lo().get(), y.lo().get()) && mpfr_equal_p(x.hi().get(), y.hi().get());
}

PartitionSpec knauf_spec(unsigned N, long beta) {
  PartitionSpec spec;
  spec.N = N;
  spec.beta = RealScalar::integer(beta);
  spec.prefix = IntMat2::A0();
  return spec;
}

}  // namespace

TEST_CASE("empty word") {
  PartitionSpec spec;
  spec.N = 0;
  spec.M = WeightMatrix::diophantine(RealScalar::surd(0, 1, 2));
  const auto r = z_general(spec);
  CHECK(r.term_count == 1);
  CHECK(test_support::near(r.value.enclosure(), std::pow(std::sqrt(2.0), -2), 1e-14));
}

TEST_CASE("hand-enumerated small sums") {
  const RealScalar r2 = RealScalar::surd(0, 1, 2);
  const double s2 = std::sqrt(2.0);
  const double two_terms = std::pow(s2 - 1, -2) + std::pow(s2, -2);
  CHECK(test_support::near(z_diophantine(r2, 1, RealScalar::integer(2)).value.enclosure(), two_terms, 1e-12));
  CHECK(test_support::near(z_diophantine(r2, 1, RealScalar::integer(2), true).value.enclosure(), two_terms + 1,
                           1e-12));

  const double phi = (1 + std::sqrt(5.0)) / 2;
  double four = 0;
  for (auto [p, q] : std::vector<std::pair<double, double>>{{2, 1}, {1, 1}, {1, 2}, {0, 1}}) {
    four += std::pow(std::fabs(p - phi * q), -2);
  }
  CHECK(test_support::near(z_diophantine(RealScalar::surd(1, 2, 5), 2, RealScalar::integer(2)).value.enclosure(),
                           four, 1e-12));

  for (long beta : {2, 3, 5}) {
    const double b = static_cast<double>(beta);
    const RealScalar B = RealScalar::integer(beta);
    CHECK(test_support::near(z_knauf(1, B).value.enclosure(), 1 + std::pow(2, -b), 1e-15));
    CHECK(test_support::near(z_knauf(2, B, KnaufForm::set).value.enclosure(), std::pow(2, -b), 1e-15));
    CHECK(test_support::near(z_knauf(3, B, KnaufForm::set).value.enclosure(),
                             2 * std::pow(3, -b) + std::pow(2, -b), 1e-15));
  }

  // x = 1: prefix A0 then words 00, 01, 10, 11.
  double fk = 0;
  for (auto [c, d] : std::vector<std::pair<double, double>>{{3, 1}, {2, 3}, {3, 2}, {1, 3}}) fk += std::pow(c + d, -2);
  CHECK(test_support::near(z_fiala_kleban(2, RealScalar::integer(1), RealScalar::integer(2)).value.enclosure(), fk,
                           1e-14));
}

TEST_CASE("engine matches a long double enumeration") {
  Gen gen(17);
  for (int i = 0; i < 25; ++i) {
    const long D = gen.integer(2, 200);
    const long r = std::lround(std::sqrt(static_cast<double>(D)));
    if (r * r == D) continue;
    const unsigned N = static_cast<unsigned>(gen.integer(0, 10));
    const mpq_class beta(gen.integer(5, 12), 2);
    const long double alpha = std::sqrt(static_cast<long double>(D));
    const long double want = brute({0, -1, 0, alpha}, kIdentity, N, beta.get_d());
    const auto got = z_diophantine(RealScalar::surd(0, 1, D), N, RealScalar::rational(beta));
    CHECK(test_support::near(got.value.enclosure(), static_cast<double>(want), 1e-9 * static_cast<double>(want)));
    CHECK(got.term_count == (1UL << N));
  }
  for (unsigned N = 0; N <= 8; ++N) {
    const long double want = brute({0, 0, 0, 1}, kA0, N, 3);
    CHECK(test_support::near(z_knauf(N, RealScalar::integer(3)).value.enclosure(), static_cast<double>(want), 1e-12));
  }
}

TEST_CASE("Fiala-Kleban at zero is the Knauf matrix form") {
  for (unsigned N = 0; N <= 6; ++N) {
    PartitionSpec fk = knauf_spec(N, 3);
    fk.M = WeightMatrix::fiala_kleban(RealScalar::integer(0));
    const auto a = z_exact(fk);
    const auto b = z_exact(knauf_spec(N, 3));
    REQUIRE(a);
    REQUIRE(b);
    CHECK(*a == *b);
    CHECK(z_fiala_kleban(N, RealScalar::integer(0), RealScalar::integer(3))
              .value.enclosure()
              .intersects(z_knauf(N, RealScalar::integer(3)).value.enclosure()));
  }
}

TEST_CASE("matrix and set forms differ by the endpoint term") {
  for (unsigned N = 0; N <= 8; ++N) {
    const Interval gap = knauf_form_gap(N, RealScalar::integer(3)).enclosure();
    CHECK(gap.contains(mpq_class(1)));
    CHECK(gap.width().to_double(MPFR_RNDU) < 1e-12);
  }
}

TEST_CASE("last-letter split") {
  const auto exact = lemma31_split(knauf_spec(3, 4));
  REQUIRE(exact.whole_exact);
  CHECK(exact.exact_equal);
  CHECK(exact.intersects);

  PartitionSpec spec;
  spec.N = 5;
  spec.M = WeightMatrix::diophantine(RealScalar::surd(1, 2, 5));
  spec.beta = RealScalar::integer(3);
  const auto inexact = lemma31_split(spec);
  CHECK(inexact.intersects);
  CHECK(inexact.parts.size() == 2);
}

TEST_CASE("last-letter split over random three-letter alphabets") {
  Gen gen(31);
  for (int i = 0; i < 20; ++i) {
    PartitionSpec spec;
    spec.N = 2;
    spec.beta = RealScalar::integer(2 * gen.integer(1, 3));
    spec.alphabet.clear();
    for (int k = 0; k < 3; ++k) {
      spec.alphabet.push_back(
          IntMat2{gen.integer(0, 4), gen.integer(0, 4), gen.integer(0, 4), gen.integer(1, 4)});
    }
    spec.M = {RealScalar::integer(gen.integer(0, 3)), RealScalar::integer(gen.integer(0, 3)),
              RealScalar::integer(gen.integer(0, 3)), RealScalar::integer(gen.integer(1, 3))};
    const auto check = lemma31_split(spec);
    REQUIRE(check.whole_exact);
    CHECK(check.exact_equal);
  }
}

TEST_CASE("depth-first, recursion and series agree") {
  const RealScalar phi = RealScalar::surd(1, 2, 5);
  const auto series = z_diophantine_series(phi, 12, RealScalar::integer(3));
  REQUIRE(series.size() == 13);
  for (unsigned N = 0; N <= 12; ++N) {
    PartitionSpec spec;
    spec.N = N;
    spec.M = WeightMatrix::diophantine(phi);
    spec.beta = RealScalar::integer(3);
    const auto dfs = z_general(spec);
    const auto rec = z_recursion(spec);
    CHECK(dfs.value.enclosure().intersects(rec.value.enclosure()));
    CHECK(dfs.value.enclosure().intersects(series[N].value.enclosure()));
  }
}

TEST_CASE("terms are the right columns") {
  PartitionSpec spec;
  spec.N = 7;
  spec.M = WeightMatrix::diophantine(RealScalar::surd(0, 1, 3));
  spec.beta = RealScalar::integer(3);
  std::vector<Fraction> seen;
  for_each_term(spec, [&seen](const TermRecord& t) { seen.emplace_back(t.p, t.q); });
  const auto cols = right_columns(7);
  REQUIRE(seen.size() == cols.size());
  bool same = true;
  for (std::size_t i = 0; i < cols.size(); ++i) same = same && seen[i] == cols[i];
  CHECK(same);
}

TEST_CASE("thread count does not change enclosures") {
  const RealScalar alpha = RealScalar::surd(0, 1, 2);
  EngineOptions one, many;
  many.threads = 4;
  const auto a = z_diophantine(alpha, 14, RealScalar::rational(mpq_class(5, 2)), false, one);
  const auto b = z_diophantine(alpha, 14, RealScalar::rational(mpq_class(5, 2)), false, many);
  CHECK(same_enclosure(a.value.enclosure(), b.value.enclosure()));
  const auto sa = z_diophantine_series(alpha, 14, RealScalar::integer(3), one);
  const auto sb = z_diophantine_series(alpha, 14, RealScalar::integer(3), many);
  for (std::size_t N = 0; N < sa.size(); ++N) {
    CHECK(same_enclosure(sa[N].value.enclosure(), sb[N].value.enclosure()));
  }
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(z_diophantine(RealScalar::rational(mpq_class(1, 2)), 2, RealScalar::integer(2)), ZeroFormError);
  CHECK_THROWS_AS(z_diophantine(RealScalar::surd(0, 1, 2), kEnumerationCap + 1, RealScalar::integer(2)), CapExceeded);
}

TEST_CASE("state energies and probabilities") {
  CHECK(state_energy(WeightMatrix::knauf(), IntMat2::A1()).enclosure().contains(mpq_class(0)));

  const RealScalar phi = RealScalar::surd(1, 2, 5);
  const IntMat2 w = word_matrix(Word::parse("110"));  // right column 2/1
  const double d = 1 / (2 - (1 + std::sqrt(5.0)) / 2);
  CHECK(test_support::near(state_energy(WeightMatrix::diophantine(phi), w).enclosure(), -std::log(d), 1e-12));

  PartitionSpec spec;
  spec.N = 0;
  spec.M = WeightMatrix::diophantine(phi);
  spec.beta = RealScalar::integer(3);
  CHECK(test_support::near(state_probability(spec, Word{}, z_general(spec)).enclosure(), 1.0, 1e-15));

  spec.N = 4;
  const auto Z = z_general(spec);
  Interval total = Interval::from_long(0, 128);
  for (unsigned long code = 0; code < 16; ++code) {
    Word word;
    for (unsigned i = 0; i < 4; ++i) word.letters.push_back(static_cast<std::uint8_t>((code >> (3 - i)) & 1));
    const Interval p = state_probability(spec, word, Z).enclosure();
    CHECK(p.lo_double() >= 0);
    total += p;
  }
  CHECK(test_support::near(total, 1.0, std::ldexp(1.0, -40)));

  // Two words with equal energy: M = Knauf, alphabet of two identical letters.
  PartitionSpec twin;
  twin.N = 1;
  twin.alphabet = {IntMat2::A1(), IntMat2::A1()};
  twin.beta = RealScalar::integer(2);
  const auto Zt = z_general(twin);
  CHECK(test_support::near(state_probability(twin, Word::parse("0"), Zt).enclosure(), 0.5, 1e-15));
}
