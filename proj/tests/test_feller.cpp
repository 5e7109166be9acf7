// Branching-diffusion transition sampler against its closed-form transform.

#include <cmath>
#include <vector>

#include "crtlab/feller.hpp"
#include "crtlab/laws.hpp"
#include "crtlab/rng.hpp"
#include "crtlab/stats.hpp"
#include "doctest.h"

using namespace crtlab;

TEST_CASE("transition matches the Laplace transform and the mean") {
  CounterRng rng(501, 0);
  const double x = 1.5, dt = 0.8;
  const size_t n = 60000;
  std::vector<double> draws;
  draws.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const double y = feller_transition_sample(rng, x, dt);
    REQUIRE(y >= 0.0);
    draws.push_back(y);
  }
  // Mean is preserved exactly.
  const auto [mean, var] = stats::mean_var(draws);
  CHECK(std::fabs(mean - x) < 4.0 * std::sqrt(var / n));
  // Empirical Laplace transform at three points, each within four standard
  // errors of exp(-lambda x/(1 + dt lambda)).
  for (const double lam : {0.5, 1.0, 2.0}) {
    double s = 0.0, s2 = 0.0;
    for (const double y : draws) {
      const double e = std::exp(-lam * y);
      s += e;
      s2 += e * e;
    }
    const double est = s / n;
    const double se =
        std::sqrt((s2 / n - est * est) / static_cast<double>(n));
    CHECK(std::fabs(est - laws::feller_laplace(x, dt, lam)) < 4.0 * se);
  }
}

TEST_CASE("extinction probability matches the closed form") {
  CounterRng rng(503, 0);
  const double x = 1.0, dt = 0.5;
  const size_t n = 60000;
  size_t extinct = 0;
  for (size_t i = 0; i < n; ++i) {
    extinct += feller_transition_sample(rng, x, dt) == 0.0;
  }
  const double p = feller_extinction(x, dt);
  CHECK(p == doctest::Approx(std::exp(-x / dt)));
  CHECK(std::fabs(static_cast<double>(extinct) / n - p) <
        4.0 * std::sqrt(p * (1.0 - p) / n));
}

TEST_CASE("two short steps compose to one long step") {
  CounterRng rng(505, 0);
  const double x = 2.0;
  const size_t n = 40000;
  std::vector<double> one_step, two_steps;
  for (size_t i = 0; i < n; ++i) {
    one_step.push_back(feller_transition_sample(rng, x, 1.0));
    const double mid = feller_transition_sample(rng, x, 0.5);
    two_steps.push_back(mid == 0.0 ? 0.0
                                   : feller_transition_sample(rng, mid, 0.5));
  }
  CHECK(stats::ks_two_sample(one_step, two_steps) <
        stats::ks_critical_two_sample(n, n, 0.0027));
}

TEST_CASE("paths absorb at zero and carry the grid") {
  CounterRng rng(507, 0);
  const FellerPath path = feller_path(rng, 1.0, 16, 0.25);
  CHECK(path.step == doctest::Approx(0.25));
  REQUIRE(path.values.size() == 17);
  CHECK(path.values.front() == doctest::Approx(1.0));
  bool dead = false;
  for (const double v : path.values) {
    REQUIRE(v >= 0.0);
    if (dead) CHECK(v == 0.0);
    if (v == 0.0) dead = true;
  }
  // Long horizons go extinct almost surely.
  size_t extinct = 0;
  for (int i = 0; i < 300; ++i) {
    const FellerPath p = feller_path(rng, 0.5, 64, 1.0);
    extinct += p.values.back() == 0.0;
  }
  CHECK(extinct > 280);
}
