#include <cmath>

#include "doctest.h"
#include "hub/beta.hpp"

using namespace hub;
using namespace hub::beta;

TEST_CASE("beta_from_preference: fixed points") {
  CHECK(beta_from_preference(0.5, 1.0) == doctest::Approx(0.0));
  // forward model with beta 1, delta -1 gives P = 1 / (1 + e)
  CHECK(beta_from_preference(0.268941, 1.0) == doctest::Approx(1.0).epsilon(1e-4));
  // beta 1.5 on delta -2, inverted with a = 0.5
  CHECK(beta_from_preference(0.047426, 0.5) == doctest::Approx(1.5).epsilon(1e-4));
  CHECK_THROWS_AS(beta_from_preference(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(beta_from_preference(0.5, -2.0), std::invalid_argument);
  // sampling noise pushing P above 0.5 clamps to zero
  CHECK(beta_from_preference(0.61, 1.0) == 0.0);
}

TEST_CASE("round trip through the forward model") {
  for (double beta : {0.01, 0.2, 1.0, 7.0, 50.0}) {
    for (double delta : {-0.1, -0.5, -2.0, -10.0}) {
      // orientation: pair (i, j) with U(i) < U(j), P = Pr(i preferred)
      const double p = boltzmann_preference(beta, 0.0, -delta);
      const double a = -1.0 / delta;
      CHECK(beta_from_preference(p, a) == doctest::Approx(beta).epsilon(1e-9));
    }
  }
}

TEST_CASE("affine_anchor maps the pair onto {0, 1} exactly") {
  RandomSource rng(5);
  for (int it = 0; it < 200; ++it) {
    const double m = (rng.uniform01() - 0.5) * 100.0;
    double n = (rng.uniform01() - 0.5) * 100.0;
    if (m == n) n += 1.0;
    const auto [a, b] = affine_anchor(m, n);
    const double lo = std::min(m, n), hi = std::max(m, n);
    CHECK(a * lo + b == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(a * hi + b == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(affine_anchor(3.0, 3.0), std::invalid_argument);
}

TEST_CASE("estimate_betas_from_logs: scaling modes") {
  // empirical rates 0.5 and 0.269 on the same pair
  std::vector<PreferenceSampleSet> samples = {
      {0, 1, 500, 1000},
      {0, 1, 269, 1000},
  };
  const auto est = estimate_betas_from_logs(samples, std::nullopt);
  CHECK(est[0].scaled == doctest::Approx(0.0));
  CHECK(est[1].scaled == doctest::Approx(1.0));
  CHECK(est[1].raw == doctest::Approx(1.0).epsilon(1e-3));

  // known delta of -1 equals the a = 1 raw scale
  const auto anchored = estimate_betas_from_logs(samples, -1.0);
  CHECK(anchored[1].scaled == doctest::Approx(anchored[1].raw));

  std::vector<PreferenceSampleSet> mixed = {{0, 1, 10, 20}, {0, 2, 10, 20}};
  CHECK_THROWS_AS(estimate_betas_from_logs(mixed, std::nullopt), std::invalid_argument);
  CHECK_THROWS_AS(estimate_betas_from_logs(samples, 1.0), std::invalid_argument);
}

TEST_CASE("scale covariance: utility rescaling cancels in normalized estimates") {
  // teachers beta = {0.4, 2.0} measured on delta = -2; scaling utilities by c
  // divides the recovered betas by c, so normalized estimates are unchanged
  const double delta = -2.0;
  for (double c : {1.0, 3.0, 0.25}) {
    std::vector<PreferenceSampleSet> samples;
    for (double beta : {0.4, 2.0}) {
      const double p = boltzmann_preference(beta / c, 0.0, -delta * c);
      samples.push_back({0, 1, std::lround(p * 1e9), 1000000000L});
    }
    const auto est = estimate_betas_from_logs(samples, std::nullopt);
    CHECK(est[0].scaled == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(est[1].scaled == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("beta_from_sensitivity") {
  CHECK(beta_from_sensitivity(0.5, 0.0, 10.0) == doctest::Approx(0.0));
  CHECK(beta_from_sensitivity(0.9, 0.0, 10.0) == doctest::Approx(std::log(9.0) / 10.0));
  // strictly monotone in the sensitivity
  double prev = -1.0;
  for (double s = 0.05; s < 0.99; s += 0.05) {
    const double b = std::log(s / (1 - s)) / 10.0;
    const double got = beta_from_sensitivity(s, 0.0, 10.0);
    CHECK(got == doctest::Approx(std::max(0.0, b)));
    if (s > 0.5) CHECK(got > prev);
    prev = got;
  }
  CHECK_THROWS_AS(beta_from_sensitivity(0.9, 5.0, 5.0), std::invalid_argument);
}

TEST_CASE("beta recovery study: consistency at scale") {
  RandomSource rng(11);
  const double mse = run_beta_recovery_study({0.01, 1.0}, 20000, 10, rng);
  CHECK(mse < 0.01);

  RandomSource rng2(12);
  const double one = run_beta_recovery_study({0.01, 1.0}, 1000, 1, rng2);
  CHECK(std::isfinite(one));
}
