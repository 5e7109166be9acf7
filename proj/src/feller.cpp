#include "crtlab/feller.hpp"

#include <cmath>
#include <stdexcept>

namespace crtlab {

double feller_transition_sample(CounterRng& rng, double x, double dt) {
  if (!(x >= 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("need x >= 0 and dt > 0");
  }
  if (x == 0.0) return 0.0;
  // Y = sum of N iid Exp(mean dt) with N ~ Poisson(x/dt): the Laplace
  // transform telescopes to exp(-x*s/(1+dt*s)) exactly.
  const uint64_t n = poisson_sample(rng, x / dt);
  if (n == 0) return 0.0;
  return dt * gamma_sample(rng, static_cast<double>(n));
}

double feller_extinction(double x, double t) {
  if (!(x >= 0.0) || !(t > 0.0)) {
    throw std::invalid_argument("need x >= 0 and t > 0");
  }
  return std::exp(-x / t);
}

FellerPath feller_path(CounterRng& rng, double x0, size_t n_steps,
                       double step) {
  FellerPath path;
  path.step = step;
  path.values.reserve(n_steps + 1);
  path.values.push_back(x0);
  for (size_t k = 0; k < n_steps; ++k) {
    path.values.push_back(feller_transition_sample(rng, path.values.back(), step));
  }
  return path;
}

}  // namespace crtlab
