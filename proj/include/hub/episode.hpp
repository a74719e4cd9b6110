// Per-timestep episode record shared by every algorithm runner.
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "hub/core.hpp"

namespace hub {

enum class ActionKind { Pull, Query };

struct StepRecord {
  int t = 0;
  ActionKind kind = ActionKind::Pull;
  int index = 0;              // arm index, or the teacher that answered
  bool general_query = false; // query issued through the single general action

  // observation
  ItemId obs_item = -1;                       // pulls
  ItemId obs_first = -1, obs_second = -1;     // queries, presentation order
  int obs_preferred_first = -1;               // 1 / 0

  double hidden_utility = std::numeric_limits<double>::quiet_NaN();  // pulls only
  double reward = 0.0;          // hidden utility for pulls, query cost for queries
  double cum_discounted = 0.0;  // sum of gamma^t * reward up to and including t

  // agent-side estimates at this step; empty when the algorithm keeps none
  std::vector<double> u_hat;
  std::vector<double> arm_est;

  bool flagged = false;  // insufficient-data fallback / belief reset
};

struct EpisodeLog {
  double gamma = 0.99;
  std::vector<StepRecord> steps;

  int horizon() const { return static_cast<int>(steps.size()); }
};

}  // namespace hub
