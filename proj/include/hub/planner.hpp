// Online Monte Carlo planner over the HUB-POMDP: UCB tree search with
// observation widening and weighted particle bags, plus the episode loop that
// plans, acts on the environment, and runs the exact Bayes filter.
#pragma once

#include <cstdint>
#include <vector>

#include "hub/episode.hpp"
#include "hub/pomdp.hpp"
#include "hub/rng.hpp"

namespace hub::planner {

enum class RolloutPolicy { RandomAction, RandomArm, BestArm };
std::string to_string(RolloutPolicy p);
RolloutPolicy rollout_policy_from_string(const std::string& name);

struct PlannerParams {
  int simulations_per_step = 1000;
  int max_depth = 15;
  double ucb_exploration = -1.0;  // < 0: use default_ucb_exploration(model, max_depth)
  double obs_widen_k = 3.0;
  double obs_widen_alpha = 0.15;
  RolloutPolicy rollout = RolloutPolicy::BestArm;
  double discount = -1.0;  // < 0: use the model's gamma; otherwise must match
};

// Exploration constant scaled to the reward range over the truncated
// planning horizon. Much larger values drown the action-value gaps in the
// exploration bonus; much smaller ones lock onto the first sampled winner.
double default_ucb_exploration(const pomdp::HubPomdpModel& model, int max_depth);

struct PlanDiagnostics {
  std::size_t tree_nodes = 0;
  int invigorations = 0;  // times an empty/degenerate particle bag was refilled
  std::vector<double> root_values;  // per action; NaN where never visited
  std::vector<int> root_visits;
  std::vector<std::pair<int, int>> edge_stats;  // (visits, observation children) per edge
};

// One planning step from the given belief. Deterministic given (belief,
// params, rng state); the belief is read-only.
pomdp::PomdpAction plan(const pomdp::HubPomdpModel& model, const pomdp::Belief& belief,
                        const PlannerParams& params, RandomSource& rng,
                        PlanDiagnostics* diag = nullptr);
pomdp::PomdpAction plan(const pomdp::HubPomdpModel& model, const pomdp::FactoredBelief& belief,
                        const PlannerParams& params, RandomSource& rng,
                        PlanDiagnostics* diag = nullptr);

// Value of playing the rollout policy from the given state for `depth` steps
// (discounted, truncated). BestArm plays the arm with the highest expected
// utility in this state for every step.
double rollout_value(RolloutPolicy policy, const pomdp::HubPomdpModel& model,
                     const pomdp::HubState& state, int depth, RandomSource& rng);

// Full episode: plan, act on the real environment, filter the belief, log.
// A zero-likelihood observation resets the belief to uniform and flags the
// step. Requires an unfiltered model matching the hub's observable structure.
EpisodeLog run_ats_episode(const HubInstance& hub, const pomdp::HubPomdpModel& model,
                           const PlannerParams& params, int horizon, RandomSource& rng,
                           std::vector<PlanDiagnostics>* step_diagnostics = nullptr);

}  // namespace hub::planner
