#pragma once
// Direct sampler for the ring-mass law seen from a mass-weighted point of a
// level set: a Poisson number of subtree contributions, with heights drawn
// log-uniformly across the ring band and masses exponential given height.

#include <vector>

#include "crtlab/rng.hpp"

namespace crtlab {

struct SpinalAtom {
  double height = 0.0;  // distance from the branch point to the observer level
  double mass = 0.0;    // level mass contributed by the subtree
};

// Branch-point contributions to the ring between radii r_inner < r_outer
// around a mass-weighted level point. Count ~ Poisson(2*log(r_outer/r_inner)),
// heights have density proportional to 1/h on [r_inner/2, r_outer/2), masses
// are exponential with mean equal to the height.
std::vector<SpinalAtom> sample_spinal_band(CounterRng& rng, double r_inner,
                                           double r_outer);

// Total ring mass: the sum of the band's atom masses (0 with probability
// (r_inner/r_outer)^2, matching the closed-form law).
double sample_lambda_star(CounterRng& rng, double r_inner, double r_outer);

}  // namespace crtlab
