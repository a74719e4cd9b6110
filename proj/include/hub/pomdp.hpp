// Planning-side model of the hidden-utility bandit: the hidden state is the
// pair (utility function, joint arm distributions), discretized onto finite
// grids and enumerated. Transitions are the identity; pulling an arm or
// querying a teacher only produces observations.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hub/core.hpp"
#include "hub/rng.hpp"

namespace hub::pomdp {

struct ImpossibleObservationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyStateSpaceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Utility values per item are restricted to these levels.
struct UtilityGrid {
  std::vector<double> levels;  // non-empty, strictly increasing
};

// Arm distributions are restricted to probability vectors whose entries are
// multiples of 1 / resolution.
struct SimplexGrid {
  int resolution = 4;  // >= 2
};

struct HubState {
  UtilityFunction utility;
  std::vector<ArmDistribution> arms;
};

struct PomdpAction {
  enum class Kind { Pull, QuerySpecific, QueryGeneral };
  Kind kind = Kind::Pull;
  int index = 0;  // arm or teacher; unused for QueryGeneral

  bool operator==(const PomdpAction&) const = default;
};
std::string to_string(const PomdpAction& a);

enum class TeacherSelection { Specific, General };

using StateFilter = std::function<bool(const HubState&)>;

// Grid enumeration helpers. Orders are deterministic: utility functions run
// through the level grid with item 0 as the most significant digit; simplex
// points enumerate compositions with the first coordinate ascending.
std::vector<std::vector<double>> enumerate_utility_functions(int n_items, const UtilityGrid& grid);
std::vector<ArmDistribution> enumerate_simplex(int n_items, const SimplexGrid& grid);

// Full discrete state space (Cartesian product of the utility grid and one
// simplex point per arm), optionally filtered. Throws EmptyStateSpaceError if
// nothing survives the filter.
std::vector<HubState> enumerate_states(int n_items, int n_arms, const UtilityGrid& u_grid,
                                       const SimplexGrid& d_grid,
                                       const StateFilter& filter = nullptr);

inline constexpr int kMaxArms = 8;
using ArmIndexArray = std::array<int, kMaxArms>;

class HubPomdpModel {
 public:
  // Built from the agent-observable parts of a HUB only: item/arm counts,
  // teachers, query profile and discount. The hidden utility function and arm
  // distributions never enter the model.
  HubPomdpModel(int n_items, int n_arms, std::vector<Teacher> teachers, QueryProfile query_profile,
                double gamma, UtilityGrid u_grid, SimplexGrid d_grid, TeacherSelection mode,
                int general_answer_teacher = -1, StateFilter filter = nullptr);

  std::int64_t num_states() const { return num_states_; }
  HubState state(std::int64_t index) const;
  int num_items() const { return n_items_; }
  int num_arms() const { return n_arms_; }
  int num_teachers() const { return static_cast<int>(teachers_.size()); }
  const std::vector<Teacher>& teachers() const { return teachers_; }
  const QueryProfile& query_profile() const { return query_profile_; }
  double gamma() const { return gamma_; }
  double u_min() const { return u_grid_.levels.front(); }
  double u_max() const { return u_grid_.levels.back(); }
  TeacherSelection mode() const { return mode_; }
  int general_answer_teacher() const { return general_answer_; }
  bool filtered() const { return filtered_.has_value(); }
  const UtilityGrid& utility_grid() const { return u_grid_; }
  const SimplexGrid& simplex_grid() const { return d_grid_; }

  const std::vector<PomdpAction>& actions() const { return actions_; }
  int num_actions() const { return static_cast<int>(actions_.size()); }
  // |Omega|: one observation per item plus one per (pair, preference).
  int num_observations() const { return n_items_ + 2 * num_item_pairs(n_items_); }

  double reward(const HubState& s, const PomdpAction& a) const;
  double observation_probability(const HubState& s, const PomdpAction& a,
                                 const AgentObservation& obs) const;

  // --- index-based interface (planner and belief hot paths) ---

  int n_utility() const { return static_cast<int>(u_space_.size()); }
  int n_dist() const { return static_cast<int>(d_space_.size()); }
  const std::vector<std::vector<double>>& utility_space() const { return u_space_; }
  const std::vector<ArmDistribution>& dist_space() const { return d_space_; }

  void decompose(std::int64_t index, int& u_idx, ArmIndexArray& d_idx) const;
  std::int64_t compose(int u_idx, const ArmIndexArray& d_idx) const;  // unfiltered only

  // Expected utility of a pull: dot(U[u_idx], D[d_idx]).
  double pull_value(int u_idx, int d_idx) const {
    return pull_value_[static_cast<std::size_t>(u_idx) * static_cast<std::size_t>(n_dist()) +
                       static_cast<std::size_t>(d_idx)];
  }
  // P(lower-indexed item of pair preferred) for a teacher under U[u_idx].
  double pref_prob(int teacher, int u_idx, int pair) const {
    return pref_[(static_cast<std::size_t>(teacher) * u_space_.size() +
                  static_cast<std::size_t>(u_idx)) *
                     static_cast<std::size_t>(n_pairs_) +
                 static_cast<std::size_t>(pair)];
  }
  double pair_probability(int pair) const { return q_prob_[static_cast<std::size_t>(pair)]; }

  int resolve_query_teacher(const PomdpAction& a) const;
  double action_reward(int u_idx, const ArmIndexArray& d_idx, int action_index) const;
  // Samples an observation code; rewards are deterministic given (s, a).
  int sample_observation(int u_idx, const ArmIndexArray& d_idx, int action_index,
                         RandomSource& rng) const;
  double observation_likelihood(int u_idx, const ArmIndexArray& d_idx, int action_index,
                                int obs_code) const;

  // Observation codes: items first, then (pair, preferred-lower) pairs.
  int encode_item_observation(ItemId item) const { return item; }
  int encode_preference_observation(int pair, bool preferred_lower) const {
    return n_items_ + 2 * pair + (preferred_lower ? 1 : 0);
  }
  // Validates that the observation variant matches the action kind.
  int encode_observation(const PomdpAction& a, const AgentObservation& obs) const;

 private:
  int n_items_ = 0;
  int n_arms_ = 0;
  int n_pairs_ = 0;
  std::vector<Teacher> teachers_;
  QueryProfile query_profile_;
  double gamma_ = 0.99;
  UtilityGrid u_grid_;
  SimplexGrid d_grid_;
  TeacherSelection mode_ = TeacherSelection::Specific;
  int general_answer_ = 0;

  std::vector<std::vector<double>> u_space_;
  std::vector<ArmDistribution> d_space_;
  std::vector<PomdpAction> actions_;
  std::int64_t num_states_ = 0;
  std::optional<std::vector<std::int64_t>> filtered_;  // composite indices kept by the filter

  std::vector<double> pull_value_;  // [u][d]
  std::vector<double> pref_;        // [teacher][u][pair]
  std::vector<double> q_prob_;      // query-profile mass per canonical pair
  std::vector<double> q_cdf_over_entries_;

  std::int64_t num_composites() const;
  std::int64_t to_composite(std::int64_t index) const;
};

// Convenience constructor from a HUB instance (observable parts only).
HubPomdpModel make_model(const HubInstance& hub, const UtilityGrid& u_grid,
                         const SimplexGrid& d_grid, TeacherSelection mode,
                         int general_answer_teacher = -1);

// Dense belief over the model's enumerated states.
struct Belief {
  std::vector<double> weights;
};

Belief initial_belief(const HubPomdpModel& model);

// Exact Bayes step: posterior proportional to prior times observation
// likelihood (transitions are the identity). Throws
// ImpossibleObservationError when the posterior mass is zero.
Belief update_belief(const HubPomdpModel& model, const Belief& belief, const PomdpAction& action,
                     const AgentObservation& obs);

std::vector<double> posterior_mean_utility(const HubPomdpModel& model, const Belief& belief);
std::vector<double> posterior_arm_values(const HubPomdpModel& model, const Belief& belief);

// Product-form belief over (U, D^1, ..., D^K). Because every observation
// likelihood touches exactly one factor and transitions are the identity, the
// exact posterior of an unfiltered model stays a product; this is the same
// distribution update_belief computes, at a fraction of the cost.
struct FactoredBelief {
  std::vector<double> u_weights;
  std::vector<std::vector<double>> d_weights;  // per arm

  static FactoredBelief uniform(const HubPomdpModel& model);
  void update(const HubPomdpModel& model, const PomdpAction& action, const AgentObservation& obs);
  std::int64_t sample(const HubPomdpModel& model, RandomSource& rng) const;
  std::vector<double> mean_utility(const HubPomdpModel& model) const;
  std::vector<double> arm_values(const HubPomdpModel& model) const;
  Belief to_dense(const HubPomdpModel& model) const;
};

}  // namespace hub::pomdp
