#include "hub/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hub {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

ItemId ArmDistribution::sample(RandomSource& rng) const {
  return rng.categorical(std::span<const double>(probs));
}

QueryProfile QueryProfile::uniform(int n_items) {
  QueryProfile q;
  const int n = num_item_pairs(n_items);
  require(n > 0, "QueryProfile::uniform: need at least 2 items");
  q.entries.reserve(static_cast<std::size_t>(n));
  const double p = 1.0 / static_cast<double>(n);
  for (int idx = 0; idx < n; ++idx) {
    auto [i, j] = pair_from_index(idx, n_items);
    q.entries.push_back({i, j, p});
  }
  return q;
}

int QueryProfile::sample_index(RandomSource& rng) const {
  require(!entries.empty(), "QueryProfile: empty");
  std::vector<double> w(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) w[k] = entries[k].prob;
  return rng.categorical(w);
}

double QueryProfile::prob(ItemId i, ItemId j) const {
  if (i > j) std::swap(i, j);
  for (const auto& e : entries) {
    if (e.first == i && e.second == j) return e.prob;
  }
  return 0.0;
}

int pair_index(ItemId i, ItemId j, int n_items) {
  if (i > j) std::swap(i, j);
  require(i >= 0 && j < n_items && i != j, "pair_index: invalid pair");
  // offset of row i plus position within the row
  return i * n_items - i * (i + 1) / 2 + (j - i - 1);
}

std::pair<ItemId, ItemId> pair_from_index(int index, int n_items) {
  require(index >= 0 && index < num_item_pairs(n_items), "pair_from_index: out of range");
  for (int i = 0; i < n_items - 1; ++i) {
    const int row = n_items - 1 - i;
    if (index < row) return {i, i + 1 + index};
    index -= row;
  }
  throw std::logic_error("pair_from_index: unreachable");
}

double boltzmann_preference(double beta, double u_i, double u_j) {
  require(std::isfinite(beta) && beta >= 0.0, "boltzmann_preference: beta must be finite and non-negative");
  require(std::isfinite(u_i) && std::isfinite(u_j), "boltzmann_preference: utilities must be finite");
  const double x = beta * (u_i - u_j);
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double boltzmann_preference(ItemId i, ItemId j, double beta, const UtilityFunction& u) {
  require(i != j, "boltzmann_preference: items must be distinct");
  return boltzmann_preference(beta, u(i), u(j));
}

PullResult pull_arm(const HubInstance& hub, int arm, RandomSource& rng) {
  require(arm >= 0 && arm < hub.num_arms(), "pull_arm: invalid arm index");
  const ItemId item = hub.arms[static_cast<std::size_t>(arm)].sample(rng);
  PullResult r;
  r.obs = ItemSample{arm, item};
  r.hidden_utility = hub.utility(item);
  return r;
}

QueryResult query_teacher(const HubInstance& hub, int teacher, RandomSource& rng) {
  require(teacher >= 0 && teacher < hub.num_teachers(), "query_teacher: invalid teacher index");
  const auto& t = hub.teachers[static_cast<std::size_t>(teacher)];
  const auto& e = hub.query_profile.entries[static_cast<std::size_t>(hub.query_profile.sample_index(rng))];
  // Presentation order is uniform; Q itself is over unordered pairs.
  ItemId first = e.first, second = e.second;
  if (rng.bernoulli(0.5)) std::swap(first, second);
  const double p = boltzmann_preference(first, second, t.beta, hub.utility);
  QueryResult r;
  r.obs = PreferenceSample{teacher, first, second, rng.bernoulli(p)};
  r.reward = t.cost;
  return r;
}

double expected_arm_utility(const UtilityFunction& u, const ArmDistribution& d) {
  require(u.num_items() == d.num_items(), "expected_arm_utility: mismatched item sets");
  double acc = 0.0;
  for (std::size_t i = 0; i < d.probs.size(); ++i) acc += u.values[i] * d.probs[i];
  return acc;
}

std::vector<std::string> validate_hub(const HubInstance& hub) {
  std::vector<std::string> out;
  auto fail = [&out](const std::string& msg) { out.push_back(msg); };
  std::ostringstream os;

  const int n = hub.num_items();
  if (n < 2) fail("items: need at least 2 items");
  if (!(hub.utility.u_min < hub.utility.u_max)) fail("utility: u_min must be strictly below u_max");
  if (hub.utility.num_items() != n) fail("utility: must define a value for every item");
  for (int i = 0; i < hub.utility.num_items(); ++i) {
    const double v = hub.utility.values[static_cast<std::size_t>(i)];
    if (!std::isfinite(v) || v < hub.utility.u_min || v > hub.utility.u_max) {
      os.str("");
      os << "utility[" << i << "]: value " << v << " outside [u_min, u_max]";
      fail(os.str());
    }
  }

  if (hub.num_arms() < 2) fail("arms: need at least 2 arms");
  for (int k = 0; k < hub.num_arms(); ++k) {
    const auto& d = hub.arms[static_cast<std::size_t>(k)];
    if (d.num_items() != n) {
      os.str("");
      os << "arms[" << k << "]: distribution over " << d.num_items() << " items, expected " << n;
      fail(os.str());
      continue;
    }
    double total = 0.0;
    bool neg = false;
    for (double p : d.probs) {
      if (!(p >= 0.0)) neg = true;
      total += p;
    }
    if (neg) {
      os.str("");
      os << "arms[" << k << "]: negative probability";
      fail(os.str());
    }
    if (std::abs(total - 1.0) > 1e-9) {
      os.str("");
      os << "arms[" << k << "]: probabilities sum to " << total << ", expected 1";
      fail(os.str());
    }
  }

  if (hub.num_teachers() < 1) fail("teachers: need at least 1 teacher");
  for (int m = 0; m < hub.num_teachers(); ++m) {
    const auto& t = hub.teachers[static_cast<std::size_t>(m)];
    if (!std::isfinite(t.beta) || t.beta < 0.0) {
      os.str("");
      os << "teachers[" << m << "]: beta must be finite and non-negative";
      fail(os.str());
    }
    if (!std::isfinite(t.cost) || t.cost > 0.0) {
      os.str("");
      os << "teachers[" << m << "]: cost must be a non-positive reward";
      fail(os.str());
    }
  }

  double qtotal = 0.0;
  for (std::size_t e = 0; e < hub.query_profile.entries.size(); ++e) {
    const auto& q = hub.query_profile.entries[e];
    if (q.first < 0 || q.second >= n || q.first >= q.second) {
      os.str("");
      os << "query_profile[" << e << "]: invalid pair (" << q.first << ", " << q.second << ")";
      fail(os.str());
    }
    if (!(q.prob >= 0.0)) {
      os.str("");
      os << "query_profile[" << e << "]: negative probability";
      fail(os.str());
    }
    for (std::size_t f = 0; f < e; ++f) {
      const auto& q2 = hub.query_profile.entries[f];
      if (q.first == q2.first && q.second == q2.second) {
        os.str("");
        os << "query_profile[" << e << "]: duplicate pair";
        fail(os.str());
      }
    }
    qtotal += q.prob;
  }
  if (hub.query_profile.entries.empty()) {
    fail("query_profile: empty");
  } else if (std::abs(qtotal - 1.0) > 1e-9) {
    os.str("");
    os << "query_profile: probabilities sum to " << qtotal << ", expected 1";
    fail(os.str());
  }

  if (!(hub.gamma > 0.0) || !(hub.gamma < 1.0)) fail("gamma: discount must lie in (0, 1)");

  if (!hub.arm_names.empty() && static_cast<int>(hub.arm_names.size()) != hub.num_arms())
    fail("arm_names: size mismatch");
  if (!hub.teacher_names.empty() && static_cast<int>(hub.teacher_names.size()) != hub.num_teachers())
    fail("teacher_names: size mismatch");

  return out;
}

double clip_probability(double p, double eps) {
  if (!(p > 0.0)) return eps;
  if (!(p < 1.0)) return 1.0 - eps;
  return p;
}

}  // namespace hub
