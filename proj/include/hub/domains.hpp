// The two experiment domains: randomly generated conference recommendation
// tasks and the fixed vaccine-testing proof of concept.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hub/core.hpp"
#include "hub/pomdp.hpp"
#include "hub/rng.hpp"

namespace hub::domains {

struct GeneratorExhaustedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GridSettings {
  pomdp::UtilityGrid u_grid;
  pomdp::SimplexGrid d_grid;
  double u_min = 0.0;
  double u_max = 10.0;
};

// Recommendation: utility levels {0, 2, ..., 10}, quarter-step simplex.
GridSettings recommendation_grids();
// Vaccine testing: unit-step utility levels, same simplex; the state space is
// several times larger than the recommendation one.
GridSettings covid_grids();

struct Task {
  HubInstance hub;
  std::uint64_t seed = 0;
  std::string name;
};

struct TaskSuite {
  std::string domain;  // "recommendation" or "covid"
  std::vector<Task> tasks;
  GridSettings grids;
  std::uint64_t master_seed = 0;
};

// Uniform rejection sampling of on-grid (utility, arm distributions) tuples:
// arm 0 strictly best in expectation, arm 1 at least as good as arm 2, all
// distributions distinct and non-deterministic, tasks pairwise distinct.
// Teachers are fixed to rationality {0, 0.01, 50} with zero cost.
TaskSuite generate_recommendation_suite(int n_tasks, const GridSettings& grids, RandomSource& rng,
                                        long max_attempts = 2000000);

struct CovidConfig {
  std::vector<std::string> tests = {"survey", "antigen", "rt-pcr"};
  std::vector<double> sensitivities = {0.70, 0.85, 0.95};  // estimates, replaceable
  std::vector<double> dollar_costs = {1.20, 42.0, 62.0};
  double cost_scale = 0.05;
  std::vector<std::string> items = {"None", "Cough", "Fever"};
  std::vector<double> symptom_utilities = {10.0, 4.0, 1.0};
  double u_min = 0.0;
  double u_max = 10.0;
  std::vector<std::string> arm_names = {"VaccineA", "VaccineB", "NoVaccine"};
  std::vector<std::vector<double>> arm_dists = {
      {0.75, 0.25, 0.00},
      {0.50, 0.25, 0.25},
      {0.25, 0.25, 0.50},
  };
  double gamma = 0.99;

  static CovidConfig defaults() { return {}; }
};

// Symptoms are items, vaccines are arms, tests are teachers whose rationality
// comes from their sensitivity and whose reward is the negated, scaled cost.
HubInstance build_covid_instance(const CovidConfig& config);

TaskSuite covid_suite(const CovidConfig& config, std::uint64_t master_seed);

// Structural validation plus the per-task generation constraints.
std::vector<std::string> validate_suite(const TaskSuite& suite);

}  // namespace hub::domains
