// Hidden-utility bandit environment: items with hidden utilities, stochastic
// arms over items, and Boltzmann-rational teachers that answer pairwise
// preference queries at a cost.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "hub/rng.hpp"

namespace hub {

using ItemId = int;  // dense indices in [0, N)

struct UtilityFunction {
  std::vector<double> values;  // indexed by item
  double u_min = 0.0;
  double u_max = 10.0;

  int num_items() const { return static_cast<int>(values.size()); }
  double operator()(ItemId item) const { return values.at(static_cast<std::size_t>(item)); }
};

struct ArmDistribution {
  std::vector<double> probs;  // indexed by item, sums to 1

  int num_items() const { return static_cast<int>(probs.size()); }
  ItemId sample(RandomSource& rng) const;
};

struct Teacher {
  double beta = 0.0;  // rationality, >= 0
  double cost = 0.0;  // query reward, <= 0
};

// Distribution over unordered item pairs presented to teachers.
struct QueryProfile {
  struct Entry {
    ItemId first = 0;   // lower item index
    ItemId second = 0;  // higher item index
    double prob = 0.0;
  };
  std::vector<Entry> entries;

  static QueryProfile uniform(int n_items);
  int num_pairs() const { return static_cast<int>(entries.size()); }
  int sample_index(RandomSource& rng) const;
  // Probability of the unordered pair {i, j}; 0 if absent.
  double prob(ItemId i, ItemId j) const;
};

// Index of the unordered pair {i, j}, i < j, in the canonical enumeration
// (0,1), (0,2), ..., (0,n-1), (1,2), ...
int pair_index(ItemId i, ItemId j, int n_items);
std::pair<ItemId, ItemId> pair_from_index(int index, int n_items);
inline int num_item_pairs(int n_items) { return n_items * (n_items - 1) / 2; }

struct ItemSample {
  int arm = -1;
  ItemId item = -1;
};

struct PreferenceSample {
  int teacher = -1;
  ItemId first = -1;   // presentation order, randomized
  ItemId second = -1;
  bool preferred_first = false;
};

using AgentObservation = std::variant<ItemSample, PreferenceSample>;

struct HubInstance {
  std::vector<std::string> items;  // size N, display names
  UtilityFunction utility;
  std::vector<ArmDistribution> arms;
  std::vector<std::string> arm_names;  // optional, defaults c1..cK
  std::vector<Teacher> teachers;
  std::vector<std::string> teacher_names;  // optional
  QueryProfile query_profile;
  double gamma = 0.99;

  int num_items() const { return static_cast<int>(items.size()); }
  int num_arms() const { return static_cast<int>(arms.size()); }
  int num_teachers() const { return static_cast<int>(teachers.size()); }
};

// Probability that a teacher with the given rationality prefers the item with
// utility u_i over the one with utility u_j. Computed in the stable logistic
// form; never overflows for large beta * (u_i - u_j).
double boltzmann_preference(double beta, double u_i, double u_j);
double boltzmann_preference(ItemId i, ItemId j, double beta, const UtilityFunction& u);

struct PullResult {
  AgentObservation obs;
  double hidden_utility = 0.0;  // received but not observed by the agent
};
PullResult pull_arm(const HubInstance& hub, int arm, RandomSource& rng);

struct QueryResult {
  AgentObservation obs;
  double reward = 0.0;  // the teacher's (non-positive) query cost
};
QueryResult query_teacher(const HubInstance& hub, int teacher, RandomSource& rng);

double expected_arm_utility(const UtilityFunction& u, const ArmDistribution& d);

// Empty result iff every structural invariant holds. Each violation names the
// offending field and rule.
std::vector<std::string> validate_hub(const HubInstance& hub);

// Keeps an empirical probability away from the degenerate endpoints so that
// logit inversions stay finite. Values strictly inside (0, 1) pass through
// unchanged; 0 and 1 (or out-of-range input) map to eps / 1 - eps.
double clip_probability(double p, double eps = 1e-6);

}  // namespace hub
