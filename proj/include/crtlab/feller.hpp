#pragma once
// Exact transition sampling for the continuous-state branching diffusion
// whose Laplace transform over a time step t is exp(-x*s/(1+t*s)). The
// level masses of the random tree evolve as this diffusion in the level
// parameter, which is what the flow experiments check.

#include <vector>

#include "crtlab/rng.hpp"

namespace crtlab {

// One exact transition of length dt started from mass x (compound
// Poisson-exponential representation; returns 0 on extinction).
double feller_transition_sample(CounterRng& rng, double x, double dt);

// Probability that the diffusion started at x is extinct by time t.
double feller_extinction(double x, double t);

struct FellerPath {
  double step = 0.0;
  std::vector<double> values;  // values[k] = state at time k*step
};

// Path on the grid {0, step, ..., n_steps*step}, absorbed at zero.
FellerPath feller_path(CounterRng& rng, double x0, size_t n_steps,
                       double step);

}  // namespace crtlab
