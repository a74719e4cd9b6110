#include "hub/beta.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace hub::beta {

double beta_from_preference(double P, double a) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw std::invalid_argument("beta_from_preference: anchor scale must be positive");
  const double p = clip_probability(P);
  const double raw = a * std::log(1.0 / p - 1.0);
  return std::max(0.0, raw);
}

std::pair<double, double> affine_anchor(double m, double n) {
  if (m == n) throw std::invalid_argument("affine_anchor: values must differ");
  // f(lesser) = 0, f(greater) = 1
  const double lesser = std::min(m, n);
  const double greater = std::max(m, n);
  const double a = 1.0 / (greater - lesser);
  const double b = -a * lesser;
  return {a, b};
}

std::vector<BetaEstimate> estimate_betas_from_logs(const std::vector<PreferenceSampleSet>& samples,
                                                   std::optional<double> known_delta) {
  if (samples.empty()) throw std::invalid_argument("estimate_betas_from_logs: no samples");
  for (const auto& s : samples) {
    if (s.item_i == samples[0].item_i && s.item_j == samples[0].item_j) continue;
    throw std::invalid_argument(
        "estimate_betas_from_logs: all teachers must be measured on the same anchor pair");
  }
  if (known_delta && !(*known_delta < 0.0))
    throw std::invalid_argument(
        "estimate_betas_from_logs: known delta must be negative (U(i) < U(j))");

  std::vector<BetaEstimate> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    BetaEstimate e;
    std::ostringstream anchor;
    anchor << "pair (" << s.item_i << ", " << s.item_j << ")";
    if (s.total <= 0) throw std::invalid_argument("estimate_betas_from_logs: empty tally");
    const double p = static_cast<double>(s.times_i_preferred) / static_cast<double>(s.total);
    const double raw_signed = std::log(1.0 / clip_probability(p) - 1.0);
    e.raw = std::max(0.0, raw_signed);
    e.clamped = raw_signed < 0.0;
    if (known_delta) {
      const double a = -1.0 / *known_delta;
      e.scaled = a * e.raw;
      anchor << ", delta " << *known_delta;
    } else {
      anchor << ", max-normalized";
    }
    e.anchor = anchor.str();
    out.push_back(std::move(e));
  }
  if (!known_delta) {
    double mx = 0.0;
    for (const auto& e : out) mx = std::max(mx, e.raw);
    for (auto& e : out) e.scaled = mx > 0.0 ? e.raw / mx : 0.0;
  }
  return out;
}

double beta_from_sensitivity(double sensitivity, double u_min, double u_max) {
  if (!(u_max > u_min)) throw std::invalid_argument("beta_from_sensitivity: u_max must exceed u_min");
  if (!(sensitivity > 0.0) || !(sensitivity < 1.0)) {
    std::cerr << "beta_from_sensitivity: degenerate sensitivity " << sensitivity
              << " clipped\n";
    sensitivity = clip_probability(sensitivity);
  }
  // sensitivity is the probability of preferring the u_max item, so the sign
  // flips relative to the lesser-item orientation
  const double b = std::log(sensitivity / (1.0 - sensitivity)) / (u_max - u_min);
  return std::max(0.0, b);
}

double run_beta_recovery_study(const std::vector<double>& true_betas, long steps, int sims,
                               RandomSource& rng) {
  if (true_betas.empty()) throw std::invalid_argument("run_beta_recovery_study: no teachers");
  if (steps < 1 || sims < 1)
    throw std::invalid_argument("run_beta_recovery_study: steps and sims must be positive");

  // fixed two-item study hub: anchor delta U(0) - U(1) = -1
  HubInstance h;
  h.items = {"i", "j"};
  h.utility.values = {0.0, 1.0};
  h.utility.u_min = 0.0;
  h.utility.u_max = 1.0;
  h.arms.resize(2);
  h.arms[0].probs = {0.75, 0.25};
  h.arms[1].probs = {0.25, 0.75};
  h.teachers.reserve(true_betas.size());
  for (double b : true_betas) h.teachers.push_back({b, 0.0});
  h.query_profile = QueryProfile::uniform(2);
  h.gamma = 0.99;

  double truth_max = 0.0;
  for (double b : true_betas) truth_max = std::max(truth_max, b);

  const int n_actions = h.num_arms() + h.num_teachers();
  double mse_acc = 0.0;
  for (int sim = 0; sim < sims; ++sim) {
    RandomSource ep = rng.fork(static_cast<std::uint64_t>(sim));
    std::vector<PreferenceSampleSet> tallies(true_betas.size());
    for (auto& t : tallies) t = {0, 1, 0, 0};
    for (long step = 0; step < steps; ++step) {
      const int a = ep.uniform_int(n_actions);
      if (a < h.num_arms()) {
        pull_arm(h, a, ep);
        continue;
      }
      const int teacher = a - h.num_arms();
      const QueryResult r = query_teacher(h, teacher, ep);
      const auto& obs = std::get<PreferenceSample>(r.obs);
      auto& t = tallies[static_cast<std::size_t>(teacher)];
      t.total++;
      if ((obs.preferred_first ? obs.first : obs.second) == 0) t.times_i_preferred++;
    }
    for (auto& t : tallies) t.total = std::max(t.total, 1L);  // steps >= 1 guard
    const auto est = estimate_betas_from_logs(tallies, std::nullopt);
    double err = 0.0;
    for (std::size_t m = 0; m < est.size(); ++m) {
      const double truth = truth_max > 0.0 ? true_betas[m] / truth_max : 0.0;
      const double d = est[m].scaled - truth;
      err += d * d;
    }
    mse_acc += err / static_cast<double>(est.size());
  }
  return mse_acc / static_cast<double>(sims);
}

}  // namespace hub::beta
