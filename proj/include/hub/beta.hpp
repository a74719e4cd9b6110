// Closed-form teacher rationality inference from preference frequencies, the
// simulated recovery study, and the conversion of diagnostic-test
// sensitivities into rationality values.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hub/core.hpp"
#include "hub/rng.hpp"

namespace hub::beta {

// One teacher's preference tallies on a fixed anchor pair (i, j), with
// U(i) < U(j) by convention.
struct PreferenceSampleSet {
  ItemId item_i = 0;
  ItemId item_j = 1;
  long times_i_preferred = 0;
  long total = 0;
};

struct BetaEstimate {
  double raw = 0.0;     // a = 1 inversion of the empirical preference rate
  double scaled = 0.0;  // anchored by the known delta, or max-normalized
  bool clamped = false; // negative inversion clamped to zero
  std::string anchor;
};

// Rationality from a preference probability: a * ln(1/P - 1), with a the
// affine scaling factor -1/delta for the anchor pair. Negative results clamp
// to zero; P is protected against the degenerate endpoints.
double beta_from_preference(double P, double a);

// Parameters of the affine map sending the lesser of {m, n} to 0 and the
// greater to 1. Exists whenever m != n.
std::pair<double, double> affine_anchor(double m, double n);

// Per-teacher estimates from tallies gathered on one shared anchor pair.
// With a known delta = U(i) - U(j) < 0 the estimates are absolutely scaled;
// otherwise they are normalized so the largest equals 1.
std::vector<BetaEstimate> estimate_betas_from_logs(const std::vector<PreferenceSampleSet>& samples,
                                                   std::optional<double> known_delta);

// Interprets a test sensitivity as the probability of preferring the
// u_max item over the u_min item and inverts: ln(s / (1 - s)) / (u_max - u_min),
// clamped to zero from below.
double beta_from_sensitivity(double sensitivity, double u_min, double u_max);

// Simulated validation: run a uniformly random policy on a fixed two-item
// hub (anchor delta -1, uniform query profile, two arms), estimate the
// teachers' rationality from the tallies, max-normalize, and return the mean
// squared error against the max-normalized truth over all simulations.
double run_beta_recovery_study(const std::vector<double>& true_betas, long steps, int sims,
                               RandomSource& rng);

}  // namespace hub::beta
