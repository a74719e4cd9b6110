// Naive baseline: explore uniformly for T steps, reconstruct the utility
// function in closed form from one teacher's preference frequencies, then
// commit to the arm with the highest estimated expected utility.
#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hub/core.hpp"
#include "hub/episode.hpp"
#include "hub/rng.hpp"

namespace hub::naive {

struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PairCounts {
  long queries = 0;
  long preferred_lower = 0;  // times the lower-indexed item of the pair won
};

struct ExplorationCounts {
  std::vector<long> arm_pulls;                               // [K]
  std::vector<std::vector<long>> arm_item_counts;            // [K][N]
  std::vector<std::vector<PairCounts>> teacher_pair_counts;  // [M][pair]
  long total_steps = 0;

  static ExplorationCounts zeros(int n_items, int n_arms, int n_teachers);
};

// One uniform exploration step: a fair coin picks arm-pull vs teacher-query,
// the arm or teacher is drawn uniformly, and the tallies are updated from the
// agent-visible observation. Returns the executed step for logging.
StepRecord explore_step(const HubInstance& hub, RandomSource& rng, ExplorationCounts& counts);

ExplorationCounts explore(const HubInstance& hub, long T, RandomSource& rng);

// Empirical arm distributions; throws InsufficientDataError naming any arm
// that was never pulled.
std::vector<ArmDistribution> estimate_distributions(const ExplorationCounts& counts);

// P(lower-indexed item preferred) per queried (teacher, pair); unqueried
// pairs are absent from the map.
using PairProbMap = std::map<std::pair<ItemId, ItemId>, double>;
std::vector<PairProbMap> estimate_preference_probs(const ExplorationCounts& counts);

// Inverts the Boltzmann preference probability into a utility difference.
// p is protected against the degenerate endpoints before inversion.
double delta_from_preference(double p, double beta);

// Ordered-pair utility differences: delta[{i, j}] = U(i) - U(j).
using DeltaMap = std::map<std::pair<ItemId, ItemId>, double>;

struct ReconstructedUtility {
  UtilityFunction u_hat;
  std::vector<bool> known;  // items reachable from the anchor through known deltas
};

// Closed-form utility reconstruction: anchors the worst item at u_min and
// scales deltas by u_max / (u_max - u_min). Missing deltas are filled through
// the anchor by chaining known differences; unreachable items stay at u_min
// and are marked unknown.
ReconstructedUtility reconstruct_utility(const DeltaMap& delta, int n_items, double u_min,
                                         double u_max);

struct NaiveEstimate {
  std::vector<ArmDistribution> d_hat;
  std::vector<PairProbMap> p_hat;
  DeltaMap delta;  // inference teacher only, both orientations
  UtilityFunction u_hat;
  std::vector<bool> u_known;
};

NaiveEstimate build_estimate(const ExplorationCounts& counts, const HubInstance& hub,
                             int inference_teacher);

// Full episode: T exploration steps, estimate, then commit for the remaining
// horizon - T steps. Insufficient data degrades to uniform-random arm pulls
// with every exploit step flagged.
EpisodeLog run_naive_policy(const HubInstance& hub, long T, int inference_teacher, int horizon,
                            RandomSource& rng);

}  // namespace hub::naive
