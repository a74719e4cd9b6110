// Experiment engine: runs the algorithm roster over task suites, computes the
// evaluation metrics, aggregates them, and exports CSV tables and figures.
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "hub/domains.hpp"
#include "hub/episode.hpp"
#include "hub/naive.hpp"
#include "hub/planner.hpp"

namespace hub::bench {

enum class AlgKind { AtsSpecific, AtsGeneral, Naive, Random, RandomArms };

struct AlgorithmSpec {
  AlgKind kind = AlgKind::AtsSpecific;
  long naive_T = 100;
  int inference_teacher = 1;  // middle teacher
  planner::PlannerParams planner;
  std::string rollout_tag;  // distinguishes rollout-comparison runs

  std::string name() const;
  // "ats", "ats-general", "naive<T>", "random", "random-arms"
  static AlgorithmSpec parse(const std::string& text);
};

std::vector<AlgorithmSpec> default_roster();

struct RunProfile {
  int runs = 5;
  int horizon = 1000;
  int smoothing_window = 10;
  int planner_simulations = 300;  // applied to ATS specs on run

  static RunProfile desk() { return {}; }
  static RunProfile full() { return {25, 1000, 10, 1000}; }
  static RunProfile micro() { return {2, 80, 10, 40}; }
  static RunProfile named(const std::string& name);
};

// Per-episode metric series, indexed by timestep.
struct EpisodeMetrics {
  std::vector<double> discounted_reward;       // cumulative, discounted
  std::vector<double> best_arm;                // pulled the true best arm
  std::vector<double> teacher_query;           // queried any teacher
  std::vector<double> u_l2;                    // NaN while no estimate exists
  std::vector<double> arm_l2;                  // NaN while no estimate exists
  std::vector<std::vector<double>> arm_pull;   // per-arm pull indicator
};

EpisodeMetrics compute_metrics(const EpisodeLog& log, const HubInstance& hub);

int true_best_arm(const HubInstance& hub);

struct MetricSeries {
  std::vector<double> mean, q25, q50, q75;
};

using AggregatedMetrics = std::map<std::string, MetricSeries>;

// Trailing moving average per episode (NaN-aware), then mean and quartiles
// across episodes per step.
AggregatedMetrics aggregate(const std::vector<EpisodeMetrics>& episodes, int window = 10);

// Trailing moving average of one series, NaN-aware.
std::vector<double> smooth(const std::vector<double>& series, int window);

// First step at which the series reaches the threshold; series length if never.
int first_passage(const std::vector<double>& series, double threshold);

// One episode. ATS kinds require the matching planning model; the optional
// diagnostics vector is filled for ATS kinds only.
EpisodeLog run_episode(const AlgorithmSpec& alg, const HubInstance& hub,
                       const pomdp::HubPomdpModel* model, int horizon, std::uint64_t seed,
                       std::vector<planner::PlanDiagnostics>* diagnostics = nullptr);

// Observer for raw episode logs (dumps, diagnostics). Called from worker
// threads; one call per episode, each with a distinct (alg, task, run) key.
struct EpisodeSink {
  std::function<void(const std::string& alg, const std::string& task, int run,
                     const EpisodeLog& log, const std::vector<planner::PlanDiagnostics>* diag)>
      fn;
  bool want_diagnostics = false;
};

// Common per-step episode CSV.
void write_episode_csv(const std::string& path, const EpisodeLog& log, const HubInstance& hub);

struct SuiteOutcome {
  struct AlgOutcome {
    std::string name;
    AggregatedMetrics agg;
    std::vector<EpisodeMetrics> episodes;  // task-major, run-minor
  };
  std::string domain;
  std::vector<AlgOutcome> algs;
  int horizon = 0;
  int runs = 0;
  int smoothing_window = 10;
  std::uint64_t master_seed = 0;

  const AlgOutcome* find(const std::string& name) const;
};

SuiteOutcome run_suite(const domains::TaskSuite& suite, const std::vector<AlgorithmSpec>& algs,
                       const RunProfile& profile, std::uint64_t master_seed, int workers,
                       const EpisodeSink* sink = nullptr);

// Reruns ATS with teacher costs {-1, -2, -3} scaled by each multiplier.
std::vector<std::pair<double, SuiteOutcome>> run_cost_sweep(const domains::TaskSuite& suite,
                                                            const std::vector<double>& multipliers,
                                                            const AlgorithmSpec& ats,
                                                            const RunProfile& profile,
                                                            std::uint64_t master_seed, int workers);

// CSV tables (algorithm, step, mean, q25, q75), figures, and a manifest.
// `figures` selects which figure analogs to render.
void export_result(const SuiteOutcome& outcome, const std::string& out_dir,
                   const std::set<std::string>& figures, const nlohmann::json& run_config);

void export_sweep(const std::vector<std::pair<double, SuiteOutcome>>& sweep,
                  const std::string& out_dir, const nlohmann::json& run_config);

int worker_count_from_env();

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace hub::bench
