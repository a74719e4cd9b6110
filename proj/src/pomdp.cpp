#include "hub/pomdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hub::pomdp {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

void validate_grids(const UtilityGrid& u, const SimplexGrid& d) {
  require(!u.levels.empty(), "UtilityGrid: empty");
  for (std::size_t i = 1; i < u.levels.size(); ++i)
    require(u.levels[i] > u.levels[i - 1], "UtilityGrid: levels must be strictly increasing");
  require(d.resolution >= 2, "SimplexGrid: resolution must be at least 2");
}

void compositions(int total, int parts, std::vector<int>& cur,
                  const std::function<void(const std::vector<int>&)>& emit) {
  if (parts == 1) {
    cur.push_back(total);
    emit(cur);
    cur.pop_back();
    return;
  }
  for (int c = 0; c <= total; ++c) {
    cur.push_back(c);
    compositions(total - c, parts - 1, cur, emit);
    cur.pop_back();
  }
}

}  // namespace

std::string to_string(const PomdpAction& a) {
  std::ostringstream os;
  switch (a.kind) {
    case PomdpAction::Kind::Pull:
      os << "pull:" << a.index;
      break;
    case PomdpAction::Kind::QuerySpecific:
      os << "query:" << a.index;
      break;
    case PomdpAction::Kind::QueryGeneral:
      os << "query:general";
      break;
  }
  return os.str();
}

std::vector<std::vector<double>> enumerate_utility_functions(int n_items, const UtilityGrid& grid) {
  require(n_items >= 1, "enumerate_utility_functions: need items");
  const int L = static_cast<int>(grid.levels.size());
  std::int64_t count = 1;
  for (int i = 0; i < n_items; ++i) count *= L;
  std::vector<std::vector<double>> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<int> digits(static_cast<std::size_t>(n_items), 0);
  for (std::int64_t idx = 0; idx < count; ++idx) {
    std::int64_t rest = idx;
    for (int i = n_items - 1; i >= 0; --i) {
      digits[static_cast<std::size_t>(i)] = static_cast<int>(rest % L);
      rest /= L;
    }
    std::vector<double> values(static_cast<std::size_t>(n_items));
    for (int i = 0; i < n_items; ++i)
      values[static_cast<std::size_t>(i)] = grid.levels[static_cast<std::size_t>(digits[static_cast<std::size_t>(i)])];
    out.push_back(std::move(values));
  }
  return out;
}

std::vector<ArmDistribution> enumerate_simplex(int n_items, const SimplexGrid& grid) {
  require(n_items >= 1, "enumerate_simplex: need items");
  std::vector<ArmDistribution> out;
  std::vector<int> cur;
  const double r = static_cast<double>(grid.resolution);
  compositions(grid.resolution, n_items, cur, [&](const std::vector<int>& counts) {
    ArmDistribution d;
    d.probs.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
      d.probs[i] = static_cast<double>(counts[i]) / r;
    out.push_back(std::move(d));
  });
  return out;
}

std::vector<HubState> enumerate_states(int n_items, int n_arms, const UtilityGrid& u_grid,
                                       const SimplexGrid& d_grid, const StateFilter& filter) {
  validate_grids(u_grid, d_grid);
  require(n_arms >= 1 && n_arms <= kMaxArms, "enumerate_states: unsupported arm count");
  const auto u_space = enumerate_utility_functions(n_items, u_grid);
  const auto d_space = enumerate_simplex(n_items, d_grid);
  const std::int64_t n_d = static_cast<std::int64_t>(d_space.size());

  std::vector<HubState> out;
  std::vector<int> d_idx(static_cast<std::size_t>(n_arms), 0);
  std::int64_t combos = 1;
  for (int k = 0; k < n_arms; ++k) combos *= n_d;
  for (std::size_t u = 0; u < u_space.size(); ++u) {
    for (std::int64_t c = 0; c < combos; ++c) {
      std::int64_t rest = c;
      for (int k = n_arms - 1; k >= 0; --k) {
        d_idx[static_cast<std::size_t>(k)] = static_cast<int>(rest % n_d);
        rest /= n_d;
      }
      HubState s;
      s.utility.values = u_space[u];
      s.utility.u_min = u_grid.levels.front();
      s.utility.u_max = u_grid.levels.back();
      s.arms.reserve(static_cast<std::size_t>(n_arms));
      for (int k = 0; k < n_arms; ++k)
        s.arms.push_back(d_space[static_cast<std::size_t>(d_idx[static_cast<std::size_t>(k)])]);
      if (filter && !filter(s)) continue;
      out.push_back(std::move(s));
    }
  }
  if (out.empty()) throw EmptyStateSpaceError("enumerate_states: filter removed every state");
  return out;
}

HubPomdpModel::HubPomdpModel(int n_items, int n_arms, std::vector<Teacher> teachers,
                             QueryProfile query_profile, double gamma, UtilityGrid u_grid,
                             SimplexGrid d_grid, TeacherSelection mode, int general_answer_teacher,
                             StateFilter filter)
    : n_items_(n_items),
      n_arms_(n_arms),
      n_pairs_(num_item_pairs(n_items)),
      teachers_(std::move(teachers)),
      query_profile_(std::move(query_profile)),
      gamma_(gamma),
      u_grid_(std::move(u_grid)),
      d_grid_(d_grid),
      mode_(mode) {
  validate_grids(u_grid_, d_grid_);
  require(n_items_ >= 2, "HubPomdpModel: need at least 2 items");
  require(n_arms_ >= 1 && n_arms_ <= kMaxArms, "HubPomdpModel: unsupported arm count");
  // a teacher-less model is legal in specific mode: the action space is pulls only
  require(!teachers_.empty() || mode_ == TeacherSelection::Specific,
          "HubPomdpModel: general mode needs a teacher to answer");
  require(teachers_.empty() || !query_profile_.entries.empty(),
          "HubPomdpModel: teachers need a query profile");
  require(gamma_ > 0.0 && gamma_ < 1.0, "HubPomdpModel: gamma must lie in (0, 1)");

  general_answer_ = general_answer_teacher >= 0 ? general_answer_teacher
                                                : static_cast<int>(teachers_.size()) / 2;
  require(teachers_.empty() || general_answer_ < static_cast<int>(teachers_.size()),
          "HubPomdpModel: general answer teacher out of range");

  u_space_ = enumerate_utility_functions(n_items_, u_grid_);
  d_space_ = enumerate_simplex(n_items_, d_grid_);

  actions_.clear();
  for (int k = 0; k < n_arms_; ++k) actions_.push_back({PomdpAction::Kind::Pull, k});
  if (mode_ == TeacherSelection::Specific) {
    for (int m = 0; m < num_teachers(); ++m)
      actions_.push_back({PomdpAction::Kind::QuerySpecific, m});
  } else {
    actions_.push_back({PomdpAction::Kind::QueryGeneral, 0});
  }

  // expected pull utility per (utility function, simplex point)
  pull_value_.resize(u_space_.size() * d_space_.size());
  for (std::size_t u = 0; u < u_space_.size(); ++u)
    for (std::size_t d = 0; d < d_space_.size(); ++d) {
      double acc = 0.0;
      for (int i = 0; i < n_items_; ++i)
        acc += u_space_[u][static_cast<std::size_t>(i)] *
               d_space_[d].probs[static_cast<std::size_t>(i)];
      pull_value_[u * d_space_.size() + d] = acc;
    }

  // preference probability of the lower-indexed item per (teacher, U, pair)
  pref_.resize(teachers_.size() * u_space_.size() * static_cast<std::size_t>(n_pairs_));
  for (std::size_t m = 0; m < teachers_.size(); ++m)
    for (std::size_t u = 0; u < u_space_.size(); ++u)
      for (int p = 0; p < n_pairs_; ++p) {
        const auto [i, j] = pair_from_index(p, n_items_);
        pref_[(m * u_space_.size() + u) * static_cast<std::size_t>(n_pairs_) +
              static_cast<std::size_t>(p)] =
            boltzmann_preference(teachers_[m].beta, u_space_[u][static_cast<std::size_t>(i)],
                                 u_space_[u][static_cast<std::size_t>(j)]);
      }

  q_prob_.assign(static_cast<std::size_t>(n_pairs_), 0.0);
  q_cdf_over_entries_.clear();
  double acc = 0.0;
  for (const auto& e : query_profile_.entries) {
    q_prob_[static_cast<std::size_t>(pair_index(e.first, e.second, n_items_))] += e.prob;
    acc += e.prob;
    q_cdf_over_entries_.push_back(acc);
  }

  if (filter) {
    std::vector<std::int64_t> kept;
    ArmIndexArray d_idx{};
    for (std::int64_t c = 0; c < num_composites(); ++c) {
      // decompose against the unfiltered layout
      std::int64_t rest = c;
      for (int k = n_arms_ - 1; k >= 0; --k) {
        d_idx[static_cast<std::size_t>(k)] = static_cast<int>(rest % n_dist());
        rest /= n_dist();
      }
      const int u_idx = static_cast<int>(rest);
      HubState s;
      s.utility.values = u_space_[static_cast<std::size_t>(u_idx)];
      s.utility.u_min = u_min();
      s.utility.u_max = u_max();
      for (int k = 0; k < n_arms_; ++k)
        s.arms.push_back(d_space_[static_cast<std::size_t>(d_idx[static_cast<std::size_t>(k)])]);
      if (filter(s)) kept.push_back(c);
    }
    if (kept.empty()) throw EmptyStateSpaceError("HubPomdpModel: filter removed every state");
    filtered_ = std::move(kept);
    num_states_ = static_cast<std::int64_t>(filtered_->size());
  } else {
    num_states_ = num_composites();
  }
}

std::int64_t HubPomdpModel::num_composites() const {
  std::int64_t n = static_cast<std::int64_t>(u_space_.size());
  for (int k = 0; k < n_arms_; ++k) n *= static_cast<std::int64_t>(d_space_.size());
  return n;
}

std::int64_t HubPomdpModel::to_composite(std::int64_t index) const {
  if (index < 0 || index >= num_states_) throw std::invalid_argument("state index out of range");
  return filtered_ ? (*filtered_)[static_cast<std::size_t>(index)] : index;
}

void HubPomdpModel::decompose(std::int64_t index, int& u_idx, ArmIndexArray& d_idx) const {
  std::int64_t rest = to_composite(index);
  const auto n_d = static_cast<std::int64_t>(d_space_.size());
  for (int k = n_arms_ - 1; k >= 0; --k) {
    d_idx[static_cast<std::size_t>(k)] = static_cast<int>(rest % n_d);
    rest /= n_d;
  }
  u_idx = static_cast<int>(rest);
}

std::int64_t HubPomdpModel::compose(int u_idx, const ArmIndexArray& d_idx) const {
  if (filtered_) throw std::logic_error("compose: not available on filtered models");
  std::int64_t idx = u_idx;
  for (int k = 0; k < n_arms_; ++k)
    idx = idx * static_cast<std::int64_t>(d_space_.size()) + d_idx[static_cast<std::size_t>(k)];
  return idx;
}

HubState HubPomdpModel::state(std::int64_t index) const {
  int u_idx = 0;
  ArmIndexArray d_idx{};
  decompose(index, u_idx, d_idx);
  HubState s;
  s.utility.values = u_space_[static_cast<std::size_t>(u_idx)];
  s.utility.u_min = u_min();
  s.utility.u_max = u_max();
  s.arms.reserve(static_cast<std::size_t>(n_arms_));
  for (int k = 0; k < n_arms_; ++k)
    s.arms.push_back(d_space_[static_cast<std::size_t>(d_idx[static_cast<std::size_t>(k)])]);
  return s;
}

int HubPomdpModel::resolve_query_teacher(const PomdpAction& a) const {
  switch (a.kind) {
    case PomdpAction::Kind::QuerySpecific:
      require(mode_ == TeacherSelection::Specific, "query action illegal in general mode");
      require(a.index >= 0 && a.index < num_teachers(), "invalid teacher index");
      return a.index;
    case PomdpAction::Kind::QueryGeneral:
      require(mode_ == TeacherSelection::General, "general query illegal in specific mode");
      return general_answer_;
    default:
      throw std::invalid_argument("resolve_query_teacher: not a query action");
  }
}

double HubPomdpModel::reward(const HubState& s, const PomdpAction& a) const {
  if (a.kind == PomdpAction::Kind::Pull) {
    require(a.index >= 0 && a.index < n_arms_, "reward: invalid arm index");
    return expected_arm_utility(s.utility, s.arms[static_cast<std::size_t>(a.index)]);
  }
  return teachers_[static_cast<std::size_t>(resolve_query_teacher(a))].cost;
}

double HubPomdpModel::observation_probability(const HubState& s, const PomdpAction& a,
                                              const AgentObservation& obs) const {
  if (a.kind == PomdpAction::Kind::Pull) {
    const auto* item = std::get_if<ItemSample>(&obs);
    require(item != nullptr, "observation_probability: pull expects an item sample");
    require(item->item >= 0 && item->item < n_items_, "observation_probability: bad item");
    return s.arms[static_cast<std::size_t>(a.index)].probs[static_cast<std::size_t>(item->item)];
  }
  const auto* pref = std::get_if<PreferenceSample>(&obs);
  require(pref != nullptr, "observation_probability: query expects a preference sample");
  const int teacher = resolve_query_teacher(a);
  const double beta = teachers_[static_cast<std::size_t>(teacher)].beta;
  const ItemId lower = std::min(pref->first, pref->second);
  const ItemId higher = std::max(pref->first, pref->second);
  const ItemId preferred = pref->preferred_first ? pref->first : pref->second;
  const double p_lower = boltzmann_preference(lower, higher, beta, s.utility);
  const double q = query_profile_.prob(lower, higher);
  return q * (preferred == lower ? p_lower : 1.0 - p_lower);
}

double HubPomdpModel::action_reward(int u_idx, const ArmIndexArray& d_idx,
                                    int action_index) const {
  const auto& a = actions_[static_cast<std::size_t>(action_index)];
  if (a.kind == PomdpAction::Kind::Pull)
    return pull_value(u_idx, d_idx[static_cast<std::size_t>(a.index)]);
  return teachers_[static_cast<std::size_t>(resolve_query_teacher(a))].cost;
}

int HubPomdpModel::sample_observation(int u_idx, const ArmIndexArray& d_idx, int action_index,
                                      RandomSource& rng) const {
  const auto& a = actions_[static_cast<std::size_t>(action_index)];
  if (a.kind == PomdpAction::Kind::Pull) {
    const auto& d = d_space_[static_cast<std::size_t>(d_idx[static_cast<std::size_t>(a.index)])];
    return encode_item_observation(d.sample(rng));
  }
  const int teacher = resolve_query_teacher(a);
  // sample a profile entry through its cumulative mass
  const double u = rng.uniform01() * q_cdf_over_entries_.back();
  std::size_t e = 0;
  while (e + 1 < q_cdf_over_entries_.size() && u >= q_cdf_over_entries_[e]) ++e;
  const auto& entry = query_profile_.entries[e];
  const int pair = pair_index(entry.first, entry.second, n_items_);
  const bool lower_preferred = rng.bernoulli(pref_prob(teacher, u_idx, pair));
  return encode_preference_observation(pair, lower_preferred);
}

double HubPomdpModel::observation_likelihood(int u_idx, const ArmIndexArray& d_idx,
                                             int action_index, int obs_code) const {
  const auto& a = actions_[static_cast<std::size_t>(action_index)];
  if (a.kind == PomdpAction::Kind::Pull) {
    const auto& d = d_space_[static_cast<std::size_t>(d_idx[static_cast<std::size_t>(a.index)])];
    return d.probs[static_cast<std::size_t>(obs_code)];
  }
  const int teacher = resolve_query_teacher(a);
  const int rel = obs_code - n_items_;
  const int pair = rel / 2;
  const bool lower_preferred = (rel % 2) == 1;
  const double p = pref_prob(teacher, u_idx, pair);
  return q_prob_[static_cast<std::size_t>(pair)] * (lower_preferred ? p : 1.0 - p);
}

int HubPomdpModel::encode_observation(const PomdpAction& a, const AgentObservation& obs) const {
  if (a.kind == PomdpAction::Kind::Pull) {
    const auto* item = std::get_if<ItemSample>(&obs);
    require(item != nullptr, "encode_observation: pull expects an item sample");
    require(item->item >= 0 && item->item < n_items_, "encode_observation: bad item");
    return encode_item_observation(item->item);
  }
  const auto* pref = std::get_if<PreferenceSample>(&obs);
  require(pref != nullptr, "encode_observation: query expects a preference sample");
  const ItemId lower = std::min(pref->first, pref->second);
  const ItemId higher = std::max(pref->first, pref->second);
  require(lower >= 0 && higher < n_items_ && lower != higher, "encode_observation: bad pair");
  const ItemId preferred = pref->preferred_first ? pref->first : pref->second;
  return encode_preference_observation(pair_index(lower, higher, n_items_), preferred == lower);
}

HubPomdpModel make_model(const HubInstance& hub, const UtilityGrid& u_grid,
                         const SimplexGrid& d_grid, TeacherSelection mode,
                         int general_answer_teacher) {
  return HubPomdpModel(hub.num_items(), hub.num_arms(), hub.teachers, hub.query_profile, hub.gamma,
                       u_grid, d_grid, mode, general_answer_teacher);
}

Belief initial_belief(const HubPomdpModel& model) {
  Belief b;
  if (model.num_states() <= 0) throw EmptyStateSpaceError("initial_belief: empty model");
  b.weights.assign(static_cast<std::size_t>(model.num_states()),
                   1.0 / static_cast<double>(model.num_states()));
  return b;
}

Belief update_belief(const HubPomdpModel& model, const Belief& belief, const PomdpAction& action,
                     const AgentObservation& obs) {
  if (static_cast<std::int64_t>(belief.weights.size()) != model.num_states())
    throw std::invalid_argument("update_belief: belief size mismatch");
  int action_index = -1;
  for (int i = 0; i < model.num_actions(); ++i)
    if (model.actions()[static_cast<std::size_t>(i)] == action) action_index = i;
  if (action_index < 0) throw std::invalid_argument("update_belief: action not in action space");
  const int code = model.encode_observation(action, obs);

  Belief post;
  post.weights.resize(belief.weights.size());
  double total = 0.0;
  int u_idx = 0;
  ArmIndexArray d_idx{};
  for (std::int64_t s = 0; s < model.num_states(); ++s) {
    const double w = belief.weights[static_cast<std::size_t>(s)];
    if (w == 0.0) {
      post.weights[static_cast<std::size_t>(s)] = 0.0;
      continue;
    }
    model.decompose(s, u_idx, d_idx);
    const double v = w * model.observation_likelihood(u_idx, d_idx, action_index, code);
    post.weights[static_cast<std::size_t>(s)] = v;
    total += v;
  }
  if (!(total > 0.0))
    throw ImpossibleObservationError("update_belief: observation has zero likelihood everywhere");
  for (auto& w : post.weights) w /= total;
  return post;
}

std::vector<double> posterior_mean_utility(const HubPomdpModel& model, const Belief& belief) {
  std::vector<double> u_marginal(static_cast<std::size_t>(model.n_utility()), 0.0);
  int u_idx = 0;
  ArmIndexArray d_idx{};
  for (std::int64_t s = 0; s < model.num_states(); ++s) {
    model.decompose(s, u_idx, d_idx);
    u_marginal[static_cast<std::size_t>(u_idx)] += belief.weights[static_cast<std::size_t>(s)];
  }
  std::vector<double> mean(static_cast<std::size_t>(model.num_items()), 0.0);
  for (int u = 0; u < model.n_utility(); ++u) {
    const double w = u_marginal[static_cast<std::size_t>(u)];
    if (w == 0.0) continue;
    for (int i = 0; i < model.num_items(); ++i)
      mean[static_cast<std::size_t>(i)] +=
          w * model.utility_space()[static_cast<std::size_t>(u)][static_cast<std::size_t>(i)];
  }
  return mean;
}

std::vector<double> posterior_arm_values(const HubPomdpModel& model, const Belief& belief) {
  std::vector<double> values(static_cast<std::size_t>(model.num_arms()), 0.0);
  int u_idx = 0;
  ArmIndexArray d_idx{};
  for (std::int64_t s = 0; s < model.num_states(); ++s) {
    const double w = belief.weights[static_cast<std::size_t>(s)];
    if (w == 0.0) continue;
    model.decompose(s, u_idx, d_idx);
    for (int k = 0; k < model.num_arms(); ++k)
      values[static_cast<std::size_t>(k)] +=
          w * model.pull_value(u_idx, d_idx[static_cast<std::size_t>(k)]);
  }
  return values;
}

FactoredBelief FactoredBelief::uniform(const HubPomdpModel& model) {
  if (model.filtered())
    throw std::logic_error("FactoredBelief: requires an unfiltered product state space");
  FactoredBelief b;
  b.u_weights.assign(static_cast<std::size_t>(model.n_utility()),
                     1.0 / static_cast<double>(model.n_utility()));
  b.d_weights.assign(static_cast<std::size_t>(model.num_arms()),
                     std::vector<double>(static_cast<std::size_t>(model.n_dist()),
                                         1.0 / static_cast<double>(model.n_dist())));
  return b;
}

void FactoredBelief::update(const HubPomdpModel& model, const PomdpAction& action,
                            const AgentObservation& obs) {
  const int code = model.encode_observation(action, obs);
  if (action.kind == PomdpAction::Kind::Pull) {
    auto& w = d_weights[static_cast<std::size_t>(action.index)];
    double total = 0.0;
    for (int d = 0; d < model.n_dist(); ++d) {
      w[static_cast<std::size_t>(d)] *=
          model.dist_space()[static_cast<std::size_t>(d)].probs[static_cast<std::size_t>(code)];
      total += w[static_cast<std::size_t>(d)];
    }
    if (!(total > 0.0))
      throw ImpossibleObservationError("FactoredBelief: item impossible under every distribution");
    for (auto& x : w) x /= total;
    return;
  }
  const int teacher = model.resolve_query_teacher(action);
  const int rel = code - model.num_items();
  const int pair = rel / 2;
  const bool lower_preferred = (rel % 2) == 1;
  double total = 0.0;
  for (int u = 0; u < model.n_utility(); ++u) {
    const double p = model.pref_prob(teacher, u, pair);
    u_weights[static_cast<std::size_t>(u)] *= lower_preferred ? p : 1.0 - p;
    total += u_weights[static_cast<std::size_t>(u)];
  }
  if (!(total > 0.0))
    throw ImpossibleObservationError("FactoredBelief: preference impossible under every utility");
  for (auto& x : u_weights) x /= total;
}

std::int64_t FactoredBelief::sample(const HubPomdpModel& model, RandomSource& rng) const {
  ArmIndexArray d_idx{};
  const int u_idx = rng.categorical(u_weights);
  for (int k = 0; k < model.num_arms(); ++k)
    d_idx[static_cast<std::size_t>(k)] = rng.categorical(d_weights[static_cast<std::size_t>(k)]);
  return model.compose(u_idx, d_idx);
}

std::vector<double> FactoredBelief::mean_utility(const HubPomdpModel& model) const {
  std::vector<double> mean(static_cast<std::size_t>(model.num_items()), 0.0);
  for (int u = 0; u < model.n_utility(); ++u) {
    const double w = u_weights[static_cast<std::size_t>(u)];
    if (w == 0.0) continue;
    for (int i = 0; i < model.num_items(); ++i)
      mean[static_cast<std::size_t>(i)] +=
          w * model.utility_space()[static_cast<std::size_t>(u)][static_cast<std::size_t>(i)];
  }
  return mean;
}

std::vector<double> FactoredBelief::arm_values(const HubPomdpModel& model) const {
  // E[sum_i U(i) D^k(i)] factorizes because U and D^k are independent.
  std::vector<double> mean_u = mean_utility(model);
  std::vector<double> out(static_cast<std::size_t>(model.num_arms()), 0.0);
  for (int k = 0; k < model.num_arms(); ++k) {
    std::vector<double> mean_d(static_cast<std::size_t>(model.num_items()), 0.0);
    const auto& w = d_weights[static_cast<std::size_t>(k)];
    for (int d = 0; d < model.n_dist(); ++d) {
      if (w[static_cast<std::size_t>(d)] == 0.0) continue;
      for (int i = 0; i < model.num_items(); ++i)
        mean_d[static_cast<std::size_t>(i)] +=
            w[static_cast<std::size_t>(d)] *
            model.dist_space()[static_cast<std::size_t>(d)].probs[static_cast<std::size_t>(i)];
    }
    double acc = 0.0;
    for (int i = 0; i < model.num_items(); ++i)
      acc += mean_u[static_cast<std::size_t>(i)] * mean_d[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(k)] = acc;
  }
  return out;
}

Belief FactoredBelief::to_dense(const HubPomdpModel& model) const {
  Belief b;
  b.weights.resize(static_cast<std::size_t>(model.num_states()));
  int u_idx = 0;
  ArmIndexArray d_idx{};
  for (std::int64_t s = 0; s < model.num_states(); ++s) {
    model.decompose(s, u_idx, d_idx);
    double w = u_weights[static_cast<std::size_t>(u_idx)];
    for (int k = 0; k < model.num_arms(); ++k)
      w *= d_weights[static_cast<std::size_t>(k)][static_cast<std::size_t>(
          d_idx[static_cast<std::size_t>(k)])];
    b.weights[static_cast<std::size_t>(s)] = w;
  }
  return b;
}

}  // namespace hub::pomdp
