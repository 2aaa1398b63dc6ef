#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "evolvekit/random.hpp"

using namespace evolvekit;

TEST_CASE("streams are reproducible and distinct") {
  RandomStream a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
    CHECK(x != d());
  }
}

TEST_CASE("mix64 has no collisions on a small range") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(mix64(i));
  CHECK(seen.size() == 10000);
}

TEST_CASE("uniform and exponential moments") {
  RandomStream rng(1, 0);
  const int count = 200000;
  double su = 0.0, se = 0.0, se2 = 0.0;
  for (int i = 0; i < count; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double e = rng.standard_exponential();
    REQUIRE(e >= 0.0);
    se += e;
    se2 += e * e;
  }
  CHECK(std::abs(su / count - 0.5) <= 3.0 * std::sqrt(1.0 / 12.0 / count));
  CHECK(std::abs(se / count - 1.0) <= 3.0 / std::sqrt(count));
  CHECK(std::abs(se2 / count - 2.0) <= 3.0 * std::sqrt(20.0 / count));
  RandomStream r2(1, 1);
  double sr = 0.0;
  for (int i = 0; i < count; ++i) sr += r2.exponential(4.0);
  CHECK(std::abs(sr / count - 0.25) <= 3.0 * 0.25 / std::sqrt(count));
}

TEST_CASE("bounded integers are uniform") {
  RandomStream rng(9, 3);
  const int bound = 7, count = 70000;
  std::vector<int> hits(bound, 0);
  for (int i = 0; i < count; ++i) {
    const auto k = rng.below(bound);
    REQUIRE(k < static_cast<std::uint64_t>(bound));
    ++hits[k];
  }
  double chi2 = 0.0;
  const double expected = static_cast<double>(count) / bound;
  for (int h : hits) chi2 += (h - expected) * (h - expected) / expected;
  CHECK(chi2 < 22.46);  // chi-square(6) upper 0.1% point
  CHECK(rng.below(1) == 0);
}
