#include "hub/naive.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace hub::naive {

ExplorationCounts ExplorationCounts::zeros(int n_items, int n_arms, int n_teachers) {
  ExplorationCounts c;
  c.arm_pulls.assign(static_cast<std::size_t>(n_arms), 0);
  c.arm_item_counts.assign(static_cast<std::size_t>(n_arms),
                           std::vector<long>(static_cast<std::size_t>(n_items), 0));
  c.teacher_pair_counts.assign(
      static_cast<std::size_t>(n_teachers),
      std::vector<PairCounts>(static_cast<std::size_t>(num_item_pairs(n_items))));
  return c;
}

StepRecord explore_step(const HubInstance& hub, RandomSource& rng, ExplorationCounts& counts) {
  StepRecord rec;
  if (rng.bernoulli(0.5)) {
    const int arm = rng.uniform_int(hub.num_arms());
    const PullResult r = pull_arm(hub, arm, rng);
    const auto& obs = std::get<ItemSample>(r.obs);
    counts.arm_pulls[static_cast<std::size_t>(arm)]++;
    counts.arm_item_counts[static_cast<std::size_t>(arm)][static_cast<std::size_t>(obs.item)]++;
    rec.kind = ActionKind::Pull;
    rec.index = arm;
    rec.obs_item = obs.item;
    rec.hidden_utility = r.hidden_utility;
    rec.reward = r.hidden_utility;
  } else {
    const int teacher = rng.uniform_int(hub.num_teachers());
    const QueryResult r = query_teacher(hub, teacher, rng);
    const auto& obs = std::get<PreferenceSample>(r.obs);
    const int pi = pair_index(obs.first, obs.second, hub.num_items());
    auto& pc = counts.teacher_pair_counts[static_cast<std::size_t>(teacher)][static_cast<std::size_t>(pi)];
    pc.queries++;
    const ItemId lower = std::min(obs.first, obs.second);
    const ItemId preferred = obs.preferred_first ? obs.first : obs.second;
    if (preferred == lower) pc.preferred_lower++;
    rec.kind = ActionKind::Query;
    rec.index = teacher;
    rec.obs_first = obs.first;
    rec.obs_second = obs.second;
    rec.obs_preferred_first = obs.preferred_first ? 1 : 0;
    rec.reward = r.reward;
  }
  counts.total_steps++;
  return rec;
}

ExplorationCounts explore(const HubInstance& hub, long T, RandomSource& rng) {
  auto counts = ExplorationCounts::zeros(hub.num_items(), hub.num_arms(), hub.num_teachers());
  for (long t = 0; t < T; ++t) explore_step(hub, rng, counts);
  return counts;
}

std::vector<ArmDistribution> estimate_distributions(const ExplorationCounts& counts) {
  std::vector<ArmDistribution> out;
  out.reserve(counts.arm_pulls.size());
  for (std::size_t k = 0; k < counts.arm_pulls.size(); ++k) {
    if (counts.arm_pulls[k] == 0) {
      std::ostringstream os;
      os << "estimate_distributions: arm " << k << " was never pulled";
      throw InsufficientDataError(os.str());
    }
    ArmDistribution d;
    d.probs.resize(counts.arm_item_counts[k].size());
    for (std::size_t i = 0; i < d.probs.size(); ++i) {
      d.probs[i] = static_cast<double>(counts.arm_item_counts[k][i]) /
                   static_cast<double>(counts.arm_pulls[k]);
    }
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<PairProbMap> estimate_preference_probs(const ExplorationCounts& counts) {
  std::vector<PairProbMap> out(counts.teacher_pair_counts.size());
  const int n_pairs = counts.teacher_pair_counts.empty()
                          ? 0
                          : static_cast<int>(counts.teacher_pair_counts[0].size());
  // recover N from the pair count: n_pairs = N (N - 1) / 2
  int n_items = 2;
  while (num_item_pairs(n_items) < n_pairs) ++n_items;
  for (std::size_t m = 0; m < counts.teacher_pair_counts.size(); ++m) {
    for (int pi = 0; pi < n_pairs; ++pi) {
      const auto& pc = counts.teacher_pair_counts[m][static_cast<std::size_t>(pi)];
      if (pc.queries == 0) continue;
      out[m][pair_from_index(pi, n_items)] =
          static_cast<double>(pc.preferred_lower) / static_cast<double>(pc.queries);
    }
  }
  return out;
}

double delta_from_preference(double p, double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta))
    throw std::invalid_argument("delta_from_preference: beta = 0 carries no utility information");
  const double q = clip_probability(p);
  return -(1.0 / beta) * std::log(1.0 / q - 1.0);
}

ReconstructedUtility reconstruct_utility(const DeltaMap& delta, int n_items, double u_min,
                                         double u_max) {
  if (delta.empty()) throw InsufficientDataError("reconstruct_utility: no utility differences");
  if (!(u_max > u_min)) throw std::invalid_argument("reconstruct_utility: u_max must exceed u_min");

  // Complete the map: antisymmetry first, then transitive chaining along
  // known differences (breadth-first, so each filled value follows the
  // shortest chain and the result is deterministic).
  DeltaMap full = delta;
  for (const auto& [key, v] : delta) {
    const auto rev = std::make_pair(key.second, key.first);
    if (!full.count(rev)) full[rev] = -v;
  }
  std::vector<std::vector<double>> to(static_cast<std::size_t>(n_items));
  std::vector<std::vector<bool>> reach(static_cast<std::size_t>(n_items));
  for (ItemId s = 0; s < n_items; ++s) {
    auto& dist = to[static_cast<std::size_t>(s)];
    auto& seen = reach[static_cast<std::size_t>(s)];
    dist.assign(static_cast<std::size_t>(n_items), 0.0);
    seen.assign(static_cast<std::size_t>(n_items), false);
    seen[static_cast<std::size_t>(s)] = true;
    std::deque<ItemId> frontier{s};
    while (!frontier.empty()) {
      const ItemId cur = frontier.front();
      frontier.pop_front();
      for (ItemId nxt = 0; nxt < n_items; ++nxt) {
        if (seen[static_cast<std::size_t>(nxt)]) continue;
        const auto it = full.find({cur, nxt});
        if (it == full.end()) continue;
        dist[static_cast<std::size_t>(nxt)] = dist[static_cast<std::size_t>(cur)] + it->second;
        seen[static_cast<std::size_t>(nxt)] = true;
        frontier.push_back(nxt);
      }
    }
  }

  // Anchor: the pair (x, y) with the largest chained difference; y becomes
  // the floor. Ties resolve to the lexicographically smallest pair.
  ItemId anchor = -1;
  double best = -std::numeric_limits<double>::infinity();
  for (ItemId x = 0; x < n_items; ++x)
    for (ItemId y = 0; y < n_items; ++y) {
      if (x == y || !reach[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]) continue;
      const double v = to[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
      if (v > best) {
        best = v;
        anchor = y;
      }
    }
  if (anchor < 0) throw InsufficientDataError("reconstruct_utility: no usable differences");

  ReconstructedUtility out;
  out.known.assign(static_cast<std::size_t>(n_items), false);
  std::vector<double> delta_to_anchor(static_cast<std::size_t>(n_items), 0.0);
  for (ItemId i = 0; i < n_items; ++i) {
    if (!reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(anchor)]) continue;
    out.known[static_cast<std::size_t>(i)] = true;
    delta_to_anchor[static_cast<std::size_t>(i)] =
        to[static_cast<std::size_t>(i)][static_cast<std::size_t>(anchor)];
  }
  out.u_hat.u_min = u_min;
  out.u_hat.u_max = u_max;
  out.u_hat.values.assign(static_cast<std::size_t>(n_items), u_min);
  const double scale = u_max / (u_max - u_min);
  for (ItemId i = 0; i < n_items; ++i) {
    if (!out.known[static_cast<std::size_t>(i)] || i == anchor) continue;
    const double v = scale * delta_to_anchor[static_cast<std::size_t>(i)] + u_min;
    out.u_hat.values[static_cast<std::size_t>(i)] = std::clamp(v, u_min, u_max);
  }
  return out;
}

NaiveEstimate build_estimate(const ExplorationCounts& counts, const HubInstance& hub,
                             int inference_teacher) {
  if (inference_teacher < 0 || inference_teacher >= hub.num_teachers())
    throw std::invalid_argument("build_estimate: invalid inference teacher");
  NaiveEstimate est;
  est.d_hat = estimate_distributions(counts);
  est.p_hat = estimate_preference_probs(counts);
  const double beta = hub.teachers[static_cast<std::size_t>(inference_teacher)].beta;
  for (const auto& [pair, p] : est.p_hat[static_cast<std::size_t>(inference_teacher)]) {
    const double d = delta_from_preference(p, beta);
    est.delta[pair] = d;
    est.delta[{pair.second, pair.first}] = -d;
  }
  auto rec = reconstruct_utility(est.delta, hub.num_items(), hub.utility.u_min, hub.utility.u_max);
  est.u_hat = std::move(rec.u_hat);
  est.u_known = std::move(rec.known);
  return est;
}

EpisodeLog run_naive_policy(const HubInstance& hub, long T, int inference_teacher, int horizon,
                            RandomSource& rng) {
  if (inference_teacher < 0 || inference_teacher >= hub.num_teachers())
    throw std::invalid_argument("run_naive_policy: invalid inference teacher");
  if (!(hub.teachers[static_cast<std::size_t>(inference_teacher)].beta > 0.0))
    throw std::invalid_argument("run_naive_policy: inference teacher must have beta > 0");
  if (T >= horizon) throw std::invalid_argument("run_naive_policy: need T < horizon");

  EpisodeLog log;
  log.gamma = hub.gamma;
  log.steps.reserve(static_cast<std::size_t>(horizon));
  auto counts = ExplorationCounts::zeros(hub.num_items(), hub.num_arms(), hub.num_teachers());

  double cum = 0.0;
  double discount = 1.0;
  auto push = [&](StepRecord rec, int t) {
    rec.t = t;
    cum += discount * rec.reward;
    discount *= hub.gamma;
    rec.cum_discounted = cum;
    log.steps.push_back(std::move(rec));
  };

  for (long t = 0; t < T; ++t) push(explore_step(hub, rng, counts), static_cast<int>(t));

  bool fallback = false;
  NaiveEstimate est;
  int exploit_arm = 0;
  try {
    est = build_estimate(counts, hub, inference_teacher);
    double best = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < hub.num_arms(); ++k) {
      const double v = expected_arm_utility(est.u_hat, est.d_hat[static_cast<std::size_t>(k)]);
      if (v > best) {
        best = v;
        exploit_arm = k;
      }
    }
  } catch (const InsufficientDataError&) {
    fallback = true;
  }

  std::vector<double> arm_est;
  if (!fallback) {
    for (int k = 0; k < hub.num_arms(); ++k)
      arm_est.push_back(expected_arm_utility(est.u_hat, est.d_hat[static_cast<std::size_t>(k)]));
  }

  for (int t = static_cast<int>(T); t < horizon; ++t) {
    const int arm = fallback ? rng.uniform_int(hub.num_arms()) : exploit_arm;
    const PullResult r = pull_arm(hub, arm, rng);
    const auto& obs = std::get<ItemSample>(r.obs);
    StepRecord rec;
    rec.kind = ActionKind::Pull;
    rec.index = arm;
    rec.obs_item = obs.item;
    rec.hidden_utility = r.hidden_utility;
    rec.reward = r.hidden_utility;
    rec.flagged = fallback;
    if (!fallback) {
      rec.u_hat = est.u_hat.values;
      rec.arm_est = arm_est;
    }
    push(std::move(rec), t);
  }
  return log;
}

}  // namespace hub::naive
