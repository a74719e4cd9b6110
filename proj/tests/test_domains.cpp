#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "hub/config.hpp"
#include "hub/domains.hpp"

using namespace hub;
using namespace hub::domains;

TEST_CASE("recommendation suite: constraints hold for every generated task") {
  RandomSource rng(41);
  const auto suite = generate_recommendation_suite(20, recommendation_grids(), rng);
  REQUIRE(suite.tasks.size() == 20);
  CHECK(validate_suite(suite).empty());

  for (const auto& task : suite.tasks) {
    const auto& h = task.hub;
    REQUIRE(h.num_arms() == 3);
    const double e0 = expected_arm_utility(h.utility, h.arms[0]);
    const double e1 = expected_arm_utility(h.utility, h.arms[1]);
    const double e2 = expected_arm_utility(h.utility, h.arms[2]);
    CHECK(e0 > e1);
    CHECK(e1 >= e2);
    CHECK(h.teachers[0].beta == 0.0);
    CHECK(h.teachers[1].beta == 0.01);
    CHECK(h.teachers[2].beta == 50.0);
    for (const auto& t : h.teachers) CHECK(t.cost == 0.0);
    for (const auto& arm : h.arms)
      for (double p : arm.probs) CHECK(p != 1.0);
  }

  // distinct tasks
  for (std::size_t a = 0; a < suite.tasks.size(); ++a)
    for (std::size_t b = a + 1; b < suite.tasks.size(); ++b) {
      const bool same_u = suite.tasks[a].hub.utility.values == suite.tasks[b].hub.utility.values;
      bool same_d = true;
      for (int k = 0; k < 3; ++k)
        if (suite.tasks[a].hub.arms[static_cast<std::size_t>(k)].probs !=
            suite.tasks[b].hub.arms[static_cast<std::size_t>(k)].probs)
          same_d = false;
      CHECK_FALSE((same_u && same_d));
    }
}

TEST_CASE("recommendation suite: seed determinism") {
  RandomSource a(7), b(7), c(8);
  const auto sa = generate_recommendation_suite(5, recommendation_grids(), a);
  const auto sb = generate_recommendation_suite(5, recommendation_grids(), b);
  const auto sc = generate_recommendation_suite(5, recommendation_grids(), c);
  CHECK(config::hub_to_json(sa.tasks[3].hub).dump() == config::hub_to_json(sb.tasks[3].hub).dump());
  CHECK(config::hub_to_json(sa.tasks[3].hub).dump() != config::hub_to_json(sc.tasks[3].hub).dump());
}

TEST_CASE("validate_suite flags broken tasks") {
  RandomSource rng(42);
  auto suite = generate_recommendation_suite(2, recommendation_grids(), rng);
  suite.tasks[0].hub.arms[1] = suite.tasks[0].hub.arms[0];  // identical distributions
  auto v = validate_suite(suite);
  bool found = false;
  for (const auto& msg : v)
    if (msg.find("identical") != std::string::npos) found = true;
  CHECK(found);

  auto suite2 = suite;
  suite2.tasks[1].hub.arms[0].probs = {1.0, 0.0, 0.0};
  v = validate_suite(suite2);
  found = false;
  for (const auto& msg : v)
    if (msg.find("deterministic") != std::string::npos) found = true;
  CHECK(found);
}

TEST_CASE("covid instance: teachers from sensitivities, costs scaled") {
  const auto config = CovidConfig::defaults();
  const auto h = build_covid_instance(config);
  CHECK(validate_hub(h).empty());
  REQUIRE(h.num_teachers() == 3);

  CHECK(h.teachers[0].cost == doctest::Approx(-0.06));
  CHECK(h.teachers[1].cost == doctest::Approx(-2.10));
  CHECK(h.teachers[2].cost == doctest::Approx(-3.10));

  CHECK(h.teachers[1].beta == doctest::Approx(std::log(0.85 / 0.15) / 10.0));
  // survey < antigen < rt-pcr when sensitivities are so ordered
  CHECK(h.teachers[0].beta < h.teachers[1].beta);
  CHECK(h.teachers[1].beta < h.teachers[2].beta);
  for (const auto& t : h.teachers) CHECK(std::isfinite(t.beta));

  // Vaccine A has the highest expected utility
  const double a = expected_arm_utility(h.utility, h.arms[0]);
  const double b = expected_arm_utility(h.utility, h.arms[1]);
  const double c = expected_arm_utility(h.utility, h.arms[2]);
  CHECK(a > b);
  CHECK(b > c);

  auto broken = config;
  broken.sensitivities.pop_back();
  CHECK_THROWS_AS(build_covid_instance(broken), std::invalid_argument);
}

TEST_CASE("covid grids give a much larger state space") {
  const auto rec = recommendation_grids();
  const auto cov = covid_grids();
  const auto n_rec = static_cast<double>(pomdp::enumerate_utility_functions(3, rec.u_grid).size()) *
                     std::pow(static_cast<double>(pomdp::enumerate_simplex(3, rec.d_grid).size()), 3);
  const auto n_cov = static_cast<double>(pomdp::enumerate_utility_functions(3, cov.u_grid).size()) *
                     std::pow(static_cast<double>(pomdp::enumerate_simplex(3, cov.d_grid).size()), 3);
  CHECK(n_rec == doctest::Approx(729000.0));
  CHECK(n_cov >= 5.0 * n_rec);
}

TEST_CASE("suite serialization round trip") {
  RandomSource rng(9);
  auto suite = generate_recommendation_suite(3, recommendation_grids(), rng);
  const auto dir = std::filesystem::temp_directory_path() / "hub_suite_roundtrip";
  std::filesystem::remove_all(dir);
  config::save_suite(suite, dir.string());
  const auto loaded = config::load_suite(dir.string());
  REQUIRE(loaded.tasks.size() == 3);
  CHECK(loaded.domain == suite.domain);
  CHECK(loaded.master_seed == suite.master_seed);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(loaded.tasks[i].seed == suite.tasks[i].seed);
    // bit-exact doubles after the round trip
    CHECK(loaded.tasks[i].hub.utility.values == suite.tasks[i].hub.utility.values);
    for (int k = 0; k < 3; ++k)
      CHECK(loaded.tasks[i].hub.arms[static_cast<std::size_t>(k)].probs ==
            suite.tasks[i].hub.arms[static_cast<std::size_t>(k)].probs);
    CHECK(loaded.tasks[i].hub.gamma == suite.tasks[i].hub.gamma);
    CHECK(loaded.tasks[i].hub.query_profile.entries[0].prob ==
          suite.tasks[i].hub.query_profile.entries[0].prob);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("covid config round trip") {
  const auto c = CovidConfig::defaults();
  const auto j = config::covid_config_to_json(c);
  const auto back = config::covid_config_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.sensitivities == c.sensitivities);
  CHECK(back.arm_dists == c.arm_dists);
  CHECK(back.cost_scale == c.cost_scale);
}
