#include "hub/domains.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>

#include "hub/beta.hpp"

namespace hub::domains {

GridSettings recommendation_grids() {
  GridSettings g;
  g.u_grid.levels = {0.0, 2.0, 4.0, 6.0, 8.0, 10.0};
  g.d_grid.resolution = 4;
  g.u_min = 0.0;
  g.u_max = 10.0;
  return g;
}

GridSettings covid_grids() {
  GridSettings g;
  g.u_grid.levels = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0};
  g.d_grid.resolution = 4;
  g.u_min = 0.0;
  g.u_max = 10.0;
  return g;
}

TaskSuite generate_recommendation_suite(int n_tasks, const GridSettings& grids, RandomSource& rng,
                                        long max_attempts) {
  if (n_tasks < 1) throw std::invalid_argument("generate_recommendation_suite: need tasks");
  const int n_items = 3;
  const int n_arms = 3;
  const auto u_space = pomdp::enumerate_utility_functions(n_items, grids.u_grid);
  const auto d_space = pomdp::enumerate_simplex(n_items, grids.d_grid);
  std::vector<bool> deterministic(d_space.size(), false);
  for (std::size_t d = 0; d < d_space.size(); ++d)
    for (double p : d_space[d].probs)
      if (p == 1.0) deterministic[d] = true;

  TaskSuite suite;
  suite.domain = "recommendation";
  suite.grids = grids;
  std::set<std::array<int, 4>> taken;

  long attempts = 0;
  while (static_cast<int>(suite.tasks.size()) < n_tasks) {
    if (++attempts > max_attempts)
      throw GeneratorExhaustedError("generate_recommendation_suite: rejection budget exhausted");
    const int u = rng.uniform_int(static_cast<int>(u_space.size()));
    std::array<int, 4> key{u, 0, 0, 0};
    bool bad = false;
    for (int k = 0; k < n_arms; ++k) {
      const int d = rng.uniform_int(static_cast<int>(d_space.size()));
      if (deterministic[static_cast<std::size_t>(d)]) bad = true;
      key[static_cast<std::size_t>(k) + 1] = d;
    }
    if (bad) continue;
    if (key[1] == key[2] || key[1] == key[3] || key[2] == key[3]) continue;

    UtilityFunction uf;
    uf.values = u_space[static_cast<std::size_t>(u)];
    uf.u_min = grids.u_min;
    uf.u_max = grids.u_max;
    const double e0 = expected_arm_utility(uf, d_space[static_cast<std::size_t>(key[1])]);
    const double e1 = expected_arm_utility(uf, d_space[static_cast<std::size_t>(key[2])]);
    const double e2 = expected_arm_utility(uf, d_space[static_cast<std::size_t>(key[3])]);
    if (!(e0 > e1 && e1 >= e2)) continue;
    if (taken.count(key)) continue;
    taken.insert(key);

    Task task;
    task.seed = rng.next_u64();
    std::ostringstream name;
    name << "task_" << std::setw(3) << std::setfill('0') << suite.tasks.size();
    task.name = name.str();
    auto& h = task.hub;
    h.items = {"A", "B", "T"};
    h.utility = uf;
    for (int k = 0; k < n_arms; ++k)
      h.arms.push_back(d_space[static_cast<std::size_t>(key[static_cast<std::size_t>(k) + 1])]);
    h.arm_names = {"c1", "c2", "c3"};
    h.teachers = {{0.0, 0.0}, {0.01, 0.0}, {50.0, 0.0}};
    h.teacher_names = {"t1", "t2", "t3"};
    h.query_profile = QueryProfile::uniform(n_items);
    h.gamma = 0.99;
    suite.tasks.push_back(std::move(task));
  }
  return suite;
}

HubInstance build_covid_instance(const CovidConfig& config) {
  const std::size_t n_tests = config.tests.size();
  if (config.sensitivities.size() != n_tests)
    throw std::invalid_argument("build_covid_instance: missing sensitivity for a test");
  if (config.dollar_costs.size() != n_tests)
    throw std::invalid_argument("build_covid_instance: missing cost for a test");
  if (!(config.cost_scale > 0.0))
    throw std::invalid_argument("build_covid_instance: cost scale must be positive");
  if (config.symptom_utilities.size() != config.items.size())
    throw std::invalid_argument("build_covid_instance: missing utility for an item");
  if (config.arm_dists.size() != config.arm_names.size())
    throw std::invalid_argument("build_covid_instance: missing distribution for an arm");

  HubInstance h;
  h.items = config.items;
  h.utility.values = config.symptom_utilities;
  h.utility.u_min = config.u_min;
  h.utility.u_max = config.u_max;
  for (const auto& probs : config.arm_dists) {
    if (probs.size() != config.items.size())
      throw std::invalid_argument("build_covid_instance: arm distribution size mismatch");
    h.arms.push_back(ArmDistribution{probs});
  }
  h.arm_names = config.arm_names;
  for (std::size_t m = 0; m < n_tests; ++m) {
    Teacher t;
    t.beta = beta::beta_from_sensitivity(config.sensitivities[m], config.u_min, config.u_max);
    t.cost = -config.dollar_costs[m] * config.cost_scale;
    h.teachers.push_back(t);
  }
  h.teacher_names = config.tests;
  h.query_profile = QueryProfile::uniform(static_cast<int>(config.items.size()));
  h.gamma = config.gamma;
  return h;
}

TaskSuite covid_suite(const CovidConfig& config, std::uint64_t master_seed) {
  TaskSuite suite;
  suite.domain = "covid";
  suite.grids = covid_grids();
  suite.grids.u_min = config.u_min;
  suite.grids.u_max = config.u_max;
  suite.master_seed = master_seed;
  Task task;
  task.hub = build_covid_instance(config);
  task.seed = derive_seed(master_seed, 0);
  task.name = "covid";
  suite.tasks.push_back(std::move(task));
  return suite;
}

namespace {

bool on_grid(double value, const std::vector<double>& levels) {
  for (double l : levels)
    if (value == l) return true;
  return false;
}

}  // namespace

std::vector<std::string> validate_suite(const TaskSuite& suite) {
  std::vector<std::string> out;
  std::ostringstream os;
  for (std::size_t i = 0; i < suite.tasks.size(); ++i) {
    const auto& task = suite.tasks[i];
    for (const auto& v : validate_hub(task.hub)) {
      os.str("");
      os << task.name << ": " << v;
      out.push_back(os.str());
    }
    if (suite.domain != "recommendation") continue;

    const auto& h = task.hub;
    for (double v : h.utility.values)
      if (!on_grid(v, suite.grids.u_grid.levels)) {
        os.str("");
        os << task.name << ": utility value " << v << " off grid";
        out.push_back(os.str());
      }
    const double res = static_cast<double>(suite.grids.d_grid.resolution);
    for (std::size_t k = 0; k < h.arms.size(); ++k)
      for (double p : h.arms[k].probs) {
        const double scaled = p * res;
        if (std::abs(scaled - std::round(scaled)) > 1e-9) {
          os.str("");
          os << task.name << ": arms[" << k << "] probability " << p << " off grid";
          out.push_back(os.str());
        }
        if (p == 1.0) {
          os.str("");
          os << task.name << ": arms[" << k << "] is deterministic";
          out.push_back(os.str());
        }
      }
    if (h.num_arms() == 3) {
      const double e0 = expected_arm_utility(h.utility, h.arms[0]);
      const double e1 = expected_arm_utility(h.utility, h.arms[1]);
      const double e2 = expected_arm_utility(h.utility, h.arms[2]);
      if (!(e0 > e1 && e1 >= e2)) {
        os.str("");
        os << task.name << ": expected utilities not ordered (arm 0 must be strictly best)";
        out.push_back(os.str());
      }
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
          if (h.arms[static_cast<std::size_t>(a)].probs == h.arms[static_cast<std::size_t>(b)].probs) {
            os.str("");
            os << task.name << ": arms " << a << " and " << b << " are identical";
            out.push_back(os.str());
          }
    }
  }
  return out;
}

}  // namespace hub::domains
