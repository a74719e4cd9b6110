#include "hub/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hub::planner {

using pomdp::ArmIndexArray;
using pomdp::FactoredBelief;
using pomdp::HubPomdpModel;
using pomdp::PomdpAction;

std::string to_string(RolloutPolicy p) {
  switch (p) {
    case RolloutPolicy::RandomAction:
      return "random-action";
    case RolloutPolicy::RandomArm:
      return "random-arm";
    case RolloutPolicy::BestArm:
      return "best-arm";
  }
  return "?";
}

RolloutPolicy rollout_policy_from_string(const std::string& name) {
  if (name == "random-action") return RolloutPolicy::RandomAction;
  if (name == "random-arm") return RolloutPolicy::RandomArm;
  if (name == "best-arm") return RolloutPolicy::BestArm;
  throw std::invalid_argument("unknown rollout policy: " + name);
}

double default_ucb_exploration(const HubPomdpModel& model, int max_depth) {
  const double truncated_geom =
      (1.0 - std::pow(model.gamma(), max_depth)) / (1.0 - model.gamma());
  return 0.07 * (model.u_max() - model.u_min()) * truncated_geom;
}

namespace {

struct ObsChild {
  int code = 0;
  int node = 0;
  int passages = 0;
};

struct ActionEdge {
  int visits = 0;
  double value = 0.0;
  std::vector<ObsChild> children;
};

struct TreeNode {
  int visits = 0;
  std::vector<std::int64_t> bag;  // composite state indices
  std::vector<double> bag_w;      // observation likelihoods at insertion
  std::vector<ActionEdge> edges;
};

struct StateSampler {
  virtual std::int64_t sample(RandomSource& rng) const = 0;
  virtual ~StateSampler() = default;
};

struct DenseSampler final : StateSampler {
  const pomdp::Belief* belief;
  explicit DenseSampler(const pomdp::Belief& b) : belief(&b) {}
  std::int64_t sample(RandomSource& rng) const override {
    return rng.categorical(belief->weights);
  }
};

struct FactoredSampler final : StateSampler {
  const HubPomdpModel* model;
  const FactoredBelief* belief;
  FactoredSampler(const HubPomdpModel& m, const FactoredBelief& b) : model(&m), belief(&b) {}
  std::int64_t sample(RandomSource& rng) const override { return belief->sample(*model, rng); }
};

class Search {
 public:
  Search(const HubPomdpModel& model, const PlannerParams& params, const StateSampler& sampler,
         RandomSource& rng)
      : model_(model), params_(params), sampler_(sampler), rng_(rng) {
    ucb_c_ = params.ucb_exploration >= 0.0 ? params.ucb_exploration
                                           : default_ucb_exploration(model, params.max_depth);
    gamma_ = params.discount >= 0.0 ? params.discount : model.gamma();
    n_actions_ = model.num_actions();
    nodes_.reserve(static_cast<std::size_t>(params.simulations_per_step) + 16);
    new_node();  // root
  }

  PomdpAction run(PlanDiagnostics* diag) {
    // Control variate: most of a path's return is the sampled state's
    // achievable value, identical across root actions. Subtracting the
    // state's clairvoyant best-arm value from each root backup (and adding
    // its mean back afterwards) leaves every comparison unbiased while
    // cancelling the state-lottery noise.
    const double geom_full = (1.0 - std::pow(gamma_, params_.max_depth)) / (1.0 - gamma_);
    double baseline_sum = 0.0;
    for (int i = 0; i < params_.simulations_per_step; ++i) {
      const std::int64_t s = sampler_.sample(rng_);
      int u_idx = 0;
      ArmIndexArray d_idx{};
      model_.decompose(s, u_idx, d_idx);
      double best = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < model_.num_arms(); ++k)
        best = std::max(best, model_.pull_value(u_idx, d_idx[static_cast<std::size_t>(k)]));
      root_baseline_ = best * geom_full;
      baseline_sum += root_baseline_;
      simulate(0, s, u_idx, d_idx, 0);
    }
    const double baseline_mean =
        baseline_sum / static_cast<double>(params_.simulations_per_step);
    for (auto& e : nodes_[0].edges)
      if (e.visits > 0) e.value += baseline_mean;

    // best root value; ties resolve to the most visited, then the lowest index
    int best = -1;
    const auto& root = nodes_[0];
    for (int a = 0; a < n_actions_; ++a) {
      const auto& e = root.edges[static_cast<std::size_t>(a)];
      if (e.visits == 0) continue;
      if (best < 0) {
        best = a;
        continue;
      }
      const auto& be = root.edges[static_cast<std::size_t>(best)];
      if (e.value > be.value || (e.value == be.value && e.visits > be.visits)) best = a;
    }
    if (best < 0) throw std::logic_error("plan: no action was ever simulated");

    if (diag) {
      diag->tree_nodes = nodes_.size();
      diag->invigorations = invigorations_;
      diag->root_values.assign(static_cast<std::size_t>(n_actions_),
                               std::numeric_limits<double>::quiet_NaN());
      diag->root_visits.assign(static_cast<std::size_t>(n_actions_), 0);
      for (int a = 0; a < n_actions_; ++a) {
        const auto& e = root.edges[static_cast<std::size_t>(a)];
        diag->root_visits[static_cast<std::size_t>(a)] = e.visits;
        if (e.visits > 0) diag->root_values[static_cast<std::size_t>(a)] = e.value;
      }
      diag->edge_stats.clear();
      for (const auto& node : nodes_)
        for (const auto& e : node.edges)
          diag->edge_stats.emplace_back(e.visits, static_cast<int>(e.children.size()));
    }
    return model_.actions()[static_cast<std::size_t>(best)];
  }

  // Rollout from a leaf. BestArm commits once to the arm with the highest
  // expected utility under the leaf node's particle belief and earns that
  // arm's value under the true leaf state; the random policies draw per step.
  double leaf_value(const TreeNode& node, int u_idx, const ArmIndexArray& d_idx, int remaining) {
    if (remaining <= 0) return 0.0;
    switch (params_.rollout) {
      case RolloutPolicy::BestArm: {
        int best_arm = 0;
        double best = -std::numeric_limits<double>::infinity();
        double total_w = 0.0;
        for (double w : node.bag_w) total_w += w;
        int pu = 0;
        ArmIndexArray pd{};
        for (int k = 0; k < model_.num_arms(); ++k) {
          double acc = 0.0;
          for (std::size_t i = 0; i < node.bag.size(); ++i) {
            const double w = total_w > 0.0 ? node.bag_w[i] : 1.0;
            if (w == 0.0) continue;
            model_.decompose(node.bag[i], pu, pd);
            acc += w * model_.pull_value(pu, pd[static_cast<std::size_t>(k)]);
          }
          if (acc > best) {
            best = acc;
            best_arm = k;
          }
        }
        return model_.pull_value(u_idx, d_idx[static_cast<std::size_t>(best_arm)]) *
               (1.0 - std::pow(gamma_, remaining)) / (1.0 - gamma_);
      }
      case RolloutPolicy::RandomArm: {
        double acc = 0.0, disc = 1.0;
        for (int t = 0; t < remaining; ++t) {
          const int k = rng_.uniform_int(model_.num_arms());
          acc += disc * model_.pull_value(u_idx, d_idx[static_cast<std::size_t>(k)]);
          disc *= gamma_;
        }
        return acc;
      }
      case RolloutPolicy::RandomAction: {
        double acc = 0.0, disc = 1.0;
        for (int t = 0; t < remaining; ++t) {
          const int a = rng_.uniform_int(n_actions_);
          acc += disc * model_.action_reward(u_idx, d_idx, a);
          disc *= gamma_;
        }
        return acc;
      }
    }
    return 0.0;
  }

 private:
  int new_node() {
    nodes_.emplace_back();
    nodes_.back().edges.resize(static_cast<std::size_t>(n_actions_));
    return static_cast<int>(nodes_.size()) - 1;
  }

  int select_action(const TreeNode& node) const {
    for (int a = 0; a < n_actions_; ++a)
      if (node.edges[static_cast<std::size_t>(a)].visits == 0) return a;
    const double log_n = std::log(static_cast<double>(std::max(node.visits, 1)));
    int best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < n_actions_; ++a) {
      const auto& e = node.edges[static_cast<std::size_t>(a)];
      const double score =
          e.value + ucb_c_ * std::sqrt(log_n / static_cast<double>(e.visits));
      if (score > best_score) {
        best_score = score;
        best = a;
      }
    }
    return best;
  }

  // Resample a state from an observation node's weighted bag. If every weight
  // is zero, refill from the root belief, importance-weighted by the
  // likelihood of this node's observation.
  std::int64_t sample_from_bag(int node_id, int action_index, int obs_code) {
    const auto& node = nodes_[static_cast<std::size_t>(node_id)];
    double total = 0.0;
    for (double w : node.bag_w) total += w;
    if (total > 0.0) {
      const int pick = rng_.categorical(node.bag_w);
      return node.bag[static_cast<std::size_t>(pick)];
    }
    ++invigorations_;
    std::int64_t fallback = -1;
    for (int attempt = 0; attempt < 32; ++attempt) {
      const std::int64_t s = sampler_.sample(rng_);
      if (fallback < 0) fallback = s;
      int u_idx = 0;
      ArmIndexArray d_idx{};
      model_.decompose(s, u_idx, d_idx);
      if (model_.observation_likelihood(u_idx, d_idx, action_index, obs_code) > 0.0) return s;
    }
    return fallback;
  }

  double simulate(int node_id, std::int64_t state, int u_idx, const ArmIndexArray& d_idx,
                  int depth) {
    if (depth >= params_.max_depth) return 0.0;

    // A node stays a rollout leaf until it has gathered a particle belief of
    // its own; only then does it expand into UCB action selection.
    {
      auto& node = nodes_[static_cast<std::size_t>(node_id)];
      if (node_id != 0 && node.visits < kExpandAfterVisits) {
        node.visits++;
        return leaf_value(node, u_idx, d_idx, params_.max_depth - depth);
      }
    }

    const int a = select_action(nodes_[static_cast<std::size_t>(node_id)]);
    const double reward = model_.action_reward(u_idx, d_idx, a);
    int code = model_.sample_observation(u_idx, d_idx, a, rng_);

    int child_id = -1;
    bool created = false;
    bool rerouted = false;
    {
      auto& edge = nodes_[static_cast<std::size_t>(node_id)].edges[static_cast<std::size_t>(a)];
      for (auto& c : edge.children)
        if (c.code == code) child_id = c.node;
      if (child_id < 0) {
        const double cap =
            params_.obs_widen_k *
            std::pow(static_cast<double>(edge.visits + 1), params_.obs_widen_alpha);
        if (static_cast<double>(edge.children.size()) + 1.0 <= cap) {
          created = true;
        } else {
          // widening bound hit: reroute to an existing branch, chosen by how
          // often each observation was generated
          rerouted = true;
          std::vector<double> w(edge.children.size());
          for (std::size_t i = 0; i < edge.children.size(); ++i)
            w[i] = static_cast<double>(edge.children[i].passages);
          const int pick = rng_.categorical(w);
          code = edge.children[static_cast<std::size_t>(pick)].code;
          child_id = edge.children[static_cast<std::size_t>(pick)].node;
        }
      }
    }
    if (created) {
      child_id = new_node();  // may reallocate nodes_
      auto& edge = nodes_[static_cast<std::size_t>(node_id)].edges[static_cast<std::size_t>(a)];
      edge.children.push_back({code, child_id, 0});
    }

    // record the particle and its likelihood under this branch's observation
    {
      auto& edge = nodes_[static_cast<std::size_t>(node_id)].edges[static_cast<std::size_t>(a)];
      for (auto& c : edge.children)
        if (c.node == child_id) c.passages++;
      auto& child = nodes_[static_cast<std::size_t>(child_id)];
      child.bag.push_back(state);
      child.bag_w.push_back(model_.observation_likelihood(u_idx, d_idx, a, code));
    }

    double total;
    if (created) {
      total = reward + gamma_ * simulate(child_id, state, u_idx, d_idx, depth + 1);
    } else if (rerouted) {
      // the path's own state may be inconsistent with the branch it was
      // pushed onto; continue from the branch's particle belief instead
      const std::int64_t next = sample_from_bag(child_id, a, code);
      int u2 = 0;
      ArmIndexArray d2{};
      model_.decompose(next, u2, d2);
      total = reward + gamma_ * simulate(child_id, next, u2, d2, depth + 1);
    } else {
      // transitions are the identity: an ordinary descent keeps its scenario
      total = reward + gamma_ * simulate(child_id, state, u_idx, d_idx, depth + 1);
    }

    auto& node = nodes_[static_cast<std::size_t>(node_id)];
    auto& edge = node.edges[static_cast<std::size_t>(a)];
    node.visits++;
    edge.visits++;
    const double backup = node_id == 0 ? total - root_baseline_ : total;
    edge.value += (backup - edge.value) / static_cast<double>(edge.visits);
    return total;
  }

  const HubPomdpModel& model_;
  const PlannerParams& params_;
  const StateSampler& sampler_;
  RandomSource& rng_;
  static constexpr int kExpandAfterVisits = 8;

  double ucb_c_ = 0.0;
  double gamma_ = 0.99;
  int n_actions_ = 0;
  int invigorations_ = 0;
  double root_baseline_ = 0.0;
  std::vector<TreeNode> nodes_;
};

void validate_params(const HubPomdpModel& model, const PlannerParams& p) {
  if (p.simulations_per_step <= 0)
    throw std::invalid_argument("PlannerParams: simulations_per_step must be positive");
  if (p.max_depth <= 0) throw std::invalid_argument("PlannerParams: max_depth must be positive");
  if (p.obs_widen_k < 1.0) throw std::invalid_argument("PlannerParams: obs_widen_k must be >= 1");
  if (p.obs_widen_alpha < 0.0 || p.obs_widen_alpha >= 1.0)
    throw std::invalid_argument("PlannerParams: obs_widen_alpha must lie in [0, 1)");
  if (p.discount >= 0.0 && std::abs(p.discount - model.gamma()) > 1e-12)
    throw std::invalid_argument("PlannerParams: discount must match the model's gamma");
}

PomdpAction plan_impl(const HubPomdpModel& model, const StateSampler& sampler,
                      const PlannerParams& params, RandomSource& rng, PlanDiagnostics* diag) {
  validate_params(model, params);
  Search search(model, params, sampler, rng);
  return search.run(diag);
}

}  // namespace

PomdpAction plan(const HubPomdpModel& model, const pomdp::Belief& belief,
                 const PlannerParams& params, RandomSource& rng, PlanDiagnostics* diag) {
  if (static_cast<std::int64_t>(belief.weights.size()) != model.num_states())
    throw std::invalid_argument("plan: belief size mismatch");
  DenseSampler sampler(belief);
  return plan_impl(model, sampler, params, rng, diag);
}

PomdpAction plan(const HubPomdpModel& model, const FactoredBelief& belief,
                 const PlannerParams& params, RandomSource& rng, PlanDiagnostics* diag) {
  FactoredSampler sampler(model, belief);
  return plan_impl(model, sampler, params, rng, diag);
}

double rollout_value(RolloutPolicy policy, const HubPomdpModel& model,
                     const pomdp::HubState& state, int depth, RandomSource& rng) {
  if (depth <= 0) return 0.0;
  const double gamma = model.gamma();
  switch (policy) {
    case RolloutPolicy::BestArm: {
      double best = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < model.num_arms(); ++k)
        best = std::max(best,
                        expected_arm_utility(state.utility, state.arms[static_cast<std::size_t>(k)]));
      return best * (1.0 - std::pow(gamma, depth)) / (1.0 - gamma);
    }
    case RolloutPolicy::RandomArm: {
      double acc = 0.0, disc = 1.0;
      for (int t = 0; t < depth; ++t) {
        const int k = rng.uniform_int(model.num_arms());
        acc += disc * expected_arm_utility(state.utility, state.arms[static_cast<std::size_t>(k)]);
        disc *= gamma;
      }
      return acc;
    }
    case RolloutPolicy::RandomAction: {
      double acc = 0.0, disc = 1.0;
      for (int t = 0; t < depth; ++t) {
        const auto& a =
            model.actions()[static_cast<std::size_t>(rng.uniform_int(model.num_actions()))];
        acc += disc * model.reward(state, a);
        disc *= gamma;
      }
      return acc;
    }
  }
  return 0.0;
}

EpisodeLog run_ats_episode(const HubInstance& hub, const HubPomdpModel& model,
                           const PlannerParams& params, int horizon, RandomSource& rng,
                           std::vector<PlanDiagnostics>* step_diagnostics) {
  if (hub.num_items() != model.num_items() || hub.num_arms() != model.num_arms() ||
      hub.num_teachers() != model.num_teachers())
    throw std::invalid_argument("run_ats_episode: hub and model disagree on structure");
  if (std::abs(hub.gamma - model.gamma()) > 1e-12)
    throw std::invalid_argument("run_ats_episode: hub and model disagree on gamma");
  if (model.filtered())
    throw std::invalid_argument("run_ats_episode: needs an unfiltered product model");

  EpisodeLog log;
  log.gamma = hub.gamma;
  log.steps.reserve(static_cast<std::size_t>(horizon));
  auto belief = FactoredBelief::uniform(model);

  double cum = 0.0;
  double disc = 1.0;
  for (int t = 0; t < horizon; ++t) {
    PlanDiagnostics diag;
    const PomdpAction action =
        plan(model, belief, params, rng, step_diagnostics ? &diag : nullptr);

    StepRecord rec;
    rec.t = t;
    AgentObservation obs;
    if (action.kind == PomdpAction::Kind::Pull) {
      const PullResult r = pull_arm(hub, action.index, rng);
      obs = r.obs;
      const auto& item = std::get<ItemSample>(r.obs);
      rec.kind = ActionKind::Pull;
      rec.index = action.index;
      rec.obs_item = item.item;
      rec.hidden_utility = r.hidden_utility;
      rec.reward = r.hidden_utility;
    } else {
      const int teacher = model.resolve_query_teacher(action);
      const QueryResult r = query_teacher(hub, teacher, rng);
      obs = r.obs;
      const auto& pref = std::get<PreferenceSample>(r.obs);
      rec.kind = ActionKind::Query;
      rec.index = teacher;
      rec.general_query = action.kind == PomdpAction::Kind::QueryGeneral;
      rec.obs_first = pref.first;
      rec.obs_second = pref.second;
      rec.obs_preferred_first = pref.preferred_first ? 1 : 0;
      rec.reward = r.reward;
    }

    try {
      belief.update(model, action, obs);
    } catch (const pomdp::ImpossibleObservationError&) {
      belief = FactoredBelief::uniform(model);
      rec.flagged = true;
    }

    cum += disc * rec.reward;
    disc *= hub.gamma;
    rec.cum_discounted = cum;
    rec.u_hat = belief.mean_utility(model);
    rec.arm_est = belief.arm_values(model);
    log.steps.push_back(std::move(rec));
    if (step_diagnostics) step_diagnostics->push_back(std::move(diag));
  }
  return log;
}

}  // namespace hub::planner
