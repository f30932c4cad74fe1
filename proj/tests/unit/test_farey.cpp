#include <doctest.h>

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "dioph/errors.hpp"
#include "dioph/farey.hpp"
#include "support.hpp"

using namespace dioph;
using test_support::Gen;

namespace {

using Pair = std::pair<long, long>;

// Mediant insertion on plain integers, decreasing order from 1/0 to 0/1.
std::vector<Pair> farey_oracle(unsigned n) {
  std::vector<Pair> set{{1, 0}, {0, 1}};
  for (unsigned level = 0; level < n; ++level) {
    std::vector<Pair> next;
    for (std::size_t i = 0; i + 1 < set.size(); ++i) {
      next.push_back(set[i]);
      next.push_back({set[i].first + set[i + 1].first, set[i].second + set[i + 1].second});
    }
    next.push_back(set.back());
    set = std::move(next);
  }
  return set;
}

std::vector<std::string> strings(const std::vector<Fraction>& fs) {
  std::vector<std::string> out;
  for (const auto& f : fs) out.push_back(f.to_string());
  return out;
}

}  // namespace

TEST_CASE("matrix products") {
  const IntMat2 m{2, 3, 5, 7};
  CHECK(mat_mul(m, IntMat2::A0()) == IntMat2{5, 3, 12, 7});
  CHECK(mat_mul(IntMat2::identity(), IntMat2::A1()) == IntMat2::A1());
  CHECK(mat_mul(IntMat2::A0(), IntMat2::A1()) == IntMat2{1, 1, 1, 2});
  CHECK(hs_product(IntMat2::A0(), IntMat2::A1()) == 2);
  CHECK(hs_product(IntMat2::A0(), IntMat2::A0()) == 3);
}

TEST_CASE("Hilbert-Schmidt value of the Diophantine weight") {
  const RealScalar alpha = RealScalar::surd(0, 1, 2);
  const IntMat2 w = word_matrix(Word::parse("101"));
  const RealScalar v = hs_product(WeightMatrix::diophantine(alpha), w);
  const double expected = std::sqrt(2.0) * w.d.get_d() - w.b.get_d();
  CHECK(test_support::near(v.enclosure(), expected, 1e-12));
}

TEST_CASE("tuple products") {
  const MatrixTuple pair{IntMat2::A0(), IntMat2::A1()};
  const MatrixTuple sq = tuple_product(pair, pair);
  REQUIRE(sq.size() == 4);
  CHECK(sq[1] == mat_mul(IntMat2::A0(), IntMat2::A1()));
  CHECK(sq[2] == mat_mul(IntMat2::A1(), IntMat2::A0()));
  CHECK(tuple_product({IntMat2::A1()}, pair).size() == 2);
  CHECK(tuple_product(pair, sq).size() == 8);
}

TEST_CASE("small Farey sets") {
  CHECK(strings(farey_set(2)) == std::vector<std::string>{"1/0", "2/1", "1/1", "1/2", "0/1"});
  CHECK(strings(farey_set(0)) == std::vector<std::string>{"1/0", "0/1"});
  const auto f3 = strings(farey_set(3));
  CHECK(f3.size() == 9);
  CHECK(std::count(f3.begin(), f3.end(), "3/2") == 1);
  CHECK(std::count(f3.begin(), f3.end(), "2/3") == 1);
  CHECK_THROWS_AS(farey_set(31), CapExceeded);
}

TEST_CASE("Farey sets match mediant insertion on machine integers") {
  for (unsigned n = 0; n <= 14; ++n) {
    const auto got = farey_set(n);
    const auto want = farey_oracle(n);
    REQUIRE(got.size() == want.size());
    bool same = true;
    for (std::size_t i = 0; i < got.size(); ++i) {
      same = same && got[i].num() == want[i].first && got[i].den() == want[i].second;
    }
    CHECK(same);
  }
}

TEST_CASE("right columns of words") {
  CHECK(strings(right_columns(1)) == std::vector<std::string>{"0/1", "1/1"});
  auto cols = strings(right_columns(2));
  std::sort(cols.begin(), cols.end());
  std::vector<std::string> want{"2/1", "1/1", "1/2", "0/1"};
  std::sort(want.begin(), want.end());
  CHECK(cols == want);
}

TEST_CASE("right columns plus infinity are the Farey set") {
  for (unsigned N = 0; N <= 12; ++N) {
    std::set<std::string> cols;
    for (const auto& f : right_columns(N)) cols.insert(f.to_string());
    CHECK(cols.size() == (std::size_t{1} << N));
    cols.insert("1/0");
    const auto set = strings(farey_set(N));
    CHECK(cols == std::set<std::string>(set.begin(), set.end()));
  }
}

TEST_CASE("random words are unimodular with reduced columns") {
  Gen gen(21);
  for (int i = 0; i < 300; ++i) {
    Word w;
    const long len = gen.integer(0, 40);
    for (long j = 0; j < len; ++j) w.letters.push_back(static_cast<std::uint8_t>(gen.integer(0, 1)));
    const IntMat2 m = word_matrix(w);
    CHECK(m.det() == 1);
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), m.b.get_mpz_t(), m.d.get_mpz_t());
    CHECK(g == 1);
    CHECK(Word::parse(w.to_string()) == w);
  }
}

TEST_CASE("localization") {
  CHECK(localize(RealScalar::surd(1, 2, 5), 2).to_string() == "10");
  CHECK(localize(RealScalar::surd(0, 1, 2), 1).to_string() == "1");
  CHECK_THROWS_AS(localize(RealScalar::rational(mpq_class(1, 2)), 2), ZeroFormError);
}

TEST_CASE("localized interval brackets alpha") {
  Gen gen(8);
  for (int i = 0; i < 40; ++i) {
    const long D = gen.integer(2, 400);
    const long r = std::lround(std::sqrt(static_cast<double>(D)));
    if (r * r == D) continue;
    const RealScalar alpha = RealScalar::surd(0, 1, D);
    const unsigned N = static_cast<unsigned>(gen.integer(1, 30));
    const IntMat2 m = word_matrix(localize(alpha, N));
    const double a = std::sqrt(static_cast<double>(D));
    const double right = m.b.get_d() / m.d.get_d();
    const double left = m.c == 0 ? INFINITY : m.a.get_d() / m.c.get_d();
    CHECK(right < a);
    CHECK(a < left);
  }
}

TEST_CASE("fraction parsing") {
  CHECK(Fraction::parse("6/4").to_string() == "3/2");
  CHECK(Fraction::parse("1/0").is_infinity());
  CHECK_THROWS_AS(Fraction::parse("1/x"), ParseError);
}
