#include <algorithm>
#include <map>
#include <vector>

#include "doctest.h"

#include "chronomap/rng.hpp"

using namespace chronomap;

TEST_CASE("same seed gives the same stream") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("mix_seed separates tags and seeds") {
  CHECK(mix_seed(1, 1) != mix_seed(1, 2));
  CHECK(mix_seed(1, 1) != mix_seed(2, 1));
  // Consecutive seeds land far apart after mixing.
  std::vector<std::uint64_t> mixed;
  for (std::uint64_t s = 0; s < 100; ++s) mixed.push_back(mix_seed(s, 7));
  std::sort(mixed.begin(), mixed.end());
  CHECK(std::adjacent_find(mixed.begin(), mixed.end()) == mixed.end());
}

TEST_CASE("next_unit stays in [0,1) and looks uniform") {
  Rng rng(7);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // Mean of n uniforms has sd = 1/sqrt(12 n) ~ 0.002; allow 5 sd.
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.025));
}

TEST_CASE("next_index covers its range without spilling") {
  Rng rng(9);
  std::map<std::size_t, int> seen;
  for (int i = 0; i < 3000; ++i) {
    const std::size_t v = rng.next_index(7);
    REQUIRE(v < 7);
    ++seen[v];
  }
  CHECK(seen.size() == 7);
  for (const auto& [value, count] : seen) {
    CAPTURE(value);
    CHECK(count > 300);  // fair share is ~429
  }
}

TEST_CASE("next_index handles n = 1") {
  Rng rng(3);
  for (int i = 0; i < 10; ++i) CHECK(rng.next_index(1) == 0);
}

TEST_CASE("shuffle permutes and reaches every order") {
  Rng rng(11);
  std::map<std::vector<int>, int> orders;
  for (int i = 0; i < 1200; ++i) {
    std::vector<int> v = {0, 1, 2};
    rng.shuffle(v);
    std::vector<int> sorted = v;
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(sorted == std::vector<int>{0, 1, 2});
    ++orders[v];
  }
  CHECK(orders.size() == 6);
  for (const auto& [order, count] : orders) CHECK(count > 100);  // fair share is 200
}

TEST_CASE("next_weighted respects weights") {
  Rng rng(13);
  SUBCASE("zero-weight entries never come up") {
    const std::vector<double> w = {0.0, 1.0, 0.0, 3.0};
    int counts[4] = {0, 0, 0, 0};
    for (int i = 0; i < 4000; ++i) ++counts[rng.next_weighted(w)];
    CHECK(counts[0] == 0);
    CHECK(counts[2] == 0);
    // 1:3 split, sd of the first share ~ 0.007; allow a wide band.
    CHECK(counts[1] > 800);
    CHECK(counts[3] > 2700);
  }
  SUBCASE("a single positive weight is always drawn") {
    const std::vector<double> w = {0.0, 0.0, 5.0};
    for (int i = 0; i < 50; ++i) CHECK(rng.next_weighted(w) == 2);
  }
}
