#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "hub/core.hpp"
#include "test_util.hpp"

using namespace hub;

TEST_CASE("boltzmann_preference: fixed points") {
  UtilityFunction u{{1.0, 0.0}, 0.0, 10.0};
  CHECK(boltzmann_preference(0, 1, 0.0, u) == doctest::Approx(0.5).epsilon(1e-12));
  UtilityFunction eq{{3.0, 3.0}, 0.0, 10.0};
  CHECK(boltzmann_preference(0, 1, 7.3, eq) == doctest::Approx(0.5).epsilon(1e-12));
  // direct evaluation: 1 / (1 + e^-1)
  CHECK(boltzmann_preference(0, 1, 1.0, u) == doctest::Approx(0.731058578630).epsilon(1e-9));
}

TEST_CASE("boltzmann_preference: extreme beta stays finite") {
  const double p = boltzmann_preference(50.0, 8.0, 2.0);
  CHECK(std::isfinite(p));
  CHECK(p > 1.0 - 1e-12);
  const double q = boltzmann_preference(50.0, 2.0, 8.0);
  CHECK(q > 0.0);
  CHECK(q < 1e-100);
}

TEST_CASE("boltzmann_preference: rejects bad parameters") {
  CHECK_THROWS_AS(boltzmann_preference(std::nan(""), 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(boltzmann_preference(-1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(boltzmann_preference(1.0, std::nan(""), 0.0), std::invalid_argument);
}

TEST_CASE("boltzmann_preference: complement, monotonicity, shift invariance") {
  RandomSource rng(7);
  for (int it = 0; it < 200; ++it) {
    const double beta = rng.uniform01() * 50.0;
    const double ui = rng.uniform01() * 10.0;
    const double uj = rng.uniform01() * 10.0;
    const double p = boltzmann_preference(beta, ui, uj);
    const double q = boltzmann_preference(beta, uj, ui);
    CHECK(std::abs(p + q - 1.0) <= 1e-12);
    const double shift = (rng.uniform01() - 0.5) * 20.0;
    CHECK(std::abs(boltzmann_preference(beta, ui + shift, uj + shift) - p) <= 1e-12);
  }
  // monotone in the utility gap for fixed beta > 0
  double prev = 0.0;
  for (double gap = -10.0; gap <= 10.0; gap += 0.5) {
    const double p = boltzmann_preference(0.7, gap, 0.0);
    if (gap > -10.0) CHECK(p > prev);
    prev = p;
  }
  // monotone in beta when u_i > u_j
  prev = 0.0;
  for (double beta = 0.1; beta <= 5.0; beta += 0.1) {
    const double p = boltzmann_preference(beta, 4.0, 1.0);
    if (beta > 0.1) CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("pull_arm: point mass and range invariant") {
  auto h = testutil::rec_hub();
  h.arms[0].probs = {1.0, 0.0, 0.0};
  RandomSource rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto r = pull_arm(h, 0, rng);
    CHECK(std::get<ItemSample>(r.obs).item == 0);
    CHECK(r.hidden_utility == doctest::Approx(8.0));
  }
  for (int i = 0; i < 500; ++i) {
    const auto r = pull_arm(h, 1, rng);
    CHECK(r.hidden_utility >= h.utility.u_min);
    CHECK(r.hidden_utility <= h.utility.u_max);
  }
  CHECK_THROWS_AS(pull_arm(h, 3, rng), std::invalid_argument);
  CHECK_THROWS_AS(pull_arm(h, -1, rng), std::invalid_argument);
}

TEST_CASE("pull_arm: empirical frequencies converge to the arm distribution") {
  auto h = testutil::rec_hub();
  h.arms[0].probs = {0.5, 0.3, 0.2};
  RandomSource rng(11);
  const int n = 100000;
  std::vector<int> counts(3, 0);
  for (int i = 0; i < n; ++i)
    counts[static_cast<std::size_t>(std::get<ItemSample>(pull_arm(h, 0, rng).obs).item)]++;
  for (int i = 0; i < 3; ++i) {
    const double freq = static_cast<double>(counts[static_cast<std::size_t>(i)]) / n;
    CHECK(std::abs(freq - h.arms[0].probs[static_cast<std::size_t>(i)]) < 0.01);
  }
}

TEST_CASE("query_teacher: beta 0 is a fair coin, high beta is near-perfect") {
  const auto h = testutil::rec_hub();
  RandomSource rng(5);
  int first_preferred = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const auto r = query_teacher(h, 0, rng);  // beta = 0
    if (std::get<PreferenceSample>(r.obs).preferred_first) first_preferred++;
  }
  CHECK(std::abs(static_cast<double>(first_preferred) / n - 0.5) < 0.02);

  // beta = 50 on pairs with gaps >= 2: the better item should nearly always win
  int better_won = 0;
  for (int i = 0; i < n; ++i) {
    const auto r = query_teacher(h, 2, rng);
    const auto& o = std::get<PreferenceSample>(r.obs);
    const ItemId preferred = o.preferred_first ? o.first : o.second;
    const ItemId other = o.preferred_first ? o.second : o.first;
    if (h.utility(preferred) > h.utility(other)) better_won++;
    CHECK(r.reward == 0.0);  // zero-cost teachers yield exactly zero reward
  }
  CHECK(static_cast<double>(better_won) / n >= 0.999);
}

TEST_CASE("query_teacher: empirical preference rate matches the Boltzmann probability") {
  auto h = testutil::rec_hub();
  h.teachers[1].beta = 1.0;
  // single-pair profile so every query hits {A, B}
  h.query_profile.entries = {{0, 1, 1.0}};
  RandomSource rng(13);
  const int n = 10000;
  int preferred_a = 0;
  for (int i = 0; i < n; ++i) {
    const auto o = std::get<PreferenceSample>(query_teacher(h, 1, rng).obs);
    const ItemId preferred = o.preferred_first ? o.first : o.second;
    if (preferred == 0) preferred_a++;
  }
  const double expect = boltzmann_preference(0, 1, 1.0, h.utility);
  CHECK(std::abs(static_cast<double>(preferred_a) / n - expect) < 0.02);
  CHECK_THROWS_AS(query_teacher(h, 9, rng), std::invalid_argument);
}

TEST_CASE("expected_arm_utility") {
  UtilityFunction u{{8.0, 2.0}, 0.0, 10.0};
  ArmDistribution point{{1.0, 0.0}};
  CHECK(expected_arm_utility(u, point) == doctest::Approx(8.0));
  ArmDistribution unif{{0.5, 0.5}};
  CHECK(expected_arm_utility(u, unif) == doctest::Approx(5.0));
  UtilityFunction constant{{3.0, 3.0}, 0.0, 10.0};
  ArmDistribution skew{{0.9, 0.1}};
  CHECK(expected_arm_utility(constant, skew) == doctest::Approx(3.0));
  ArmDistribution wrong{{0.5, 0.25, 0.25}};
  CHECK_THROWS_AS(expected_arm_utility(u, wrong), std::invalid_argument);
}

TEST_CASE("validate_hub") {
  auto h = testutil::rec_hub();
  CHECK(validate_hub(h).empty());

  auto bad = h;
  bad.arms[1].probs = {0.5, 0.2, 0.2};  // sums to 0.9
  auto v = validate_hub(bad);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("arms[1]") != std::string::npos);

  auto bad2 = h;
  bad2.gamma = 1.0;
  v = validate_hub(bad2);
  REQUIRE(v.size() == 1);
  CHECK(v[0].find("gamma") != std::string::npos);
}

TEST_CASE("pair indexing round trip") {
  for (int n : {2, 3, 5, 8}) {
    for (int idx = 0; idx < num_item_pairs(n); ++idx) {
      const auto [i, j] = pair_from_index(idx, n);
      CHECK(i < j);
      CHECK(pair_index(i, j, n) == idx);
      CHECK(pair_index(j, i, n) == idx);
    }
  }
  const auto q = QueryProfile::uniform(4);
  double total = 0.0;
  for (const auto& e : q.entries) total += e.prob;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(q.num_pairs() == 6);
}

TEST_CASE("RandomSource: determinism and categorical sampling") {
  RandomSource a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  RandomSource rng(1);
  std::vector<double> w = {0.0, 2.0, 0.0, 1.0};
  std::vector<int> counts(4, 0);
  for (int i = 0; i < 30000; ++i) counts[static_cast<std::size_t>(rng.categorical(w))]++;
  CHECK(counts[0] == 0);
  CHECK(counts[2] == 0);
  CHECK(std::abs(counts[1] / 30000.0 - 2.0 / 3.0) < 0.02);
}
