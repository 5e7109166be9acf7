#include "crtlab/spinal.hpp"

#include <cmath>
#include <stdexcept>

namespace crtlab {

std::vector<SpinalAtom> sample_spinal_band(CounterRng& rng, double r_inner,
                                           double r_outer) {
  if (!(r_inner > 0.0) || !(r_outer > r_inner)) {
    throw std::invalid_argument("need 0 < r_inner < r_outer");
  }
  const double ratio = r_outer / r_inner;
  const uint64_t k = poisson_sample(rng, 2.0 * std::log(ratio));
  std::vector<SpinalAtom> atoms(k);
  for (auto& atom : atoms) {
    // Density 1/h on [r_inner/2, r_outer/2), normalized: h = (r_inner/2)*ratio^U.
    atom.height = 0.5 * r_inner * std::pow(ratio, rng.next_double());
    atom.mass = exponential_sample(rng, atom.height);
  }
  return atoms;
}

double sample_lambda_star(CounterRng& rng, double r_inner, double r_outer) {
  double total = 0.0;
  for (const auto& atom : sample_spinal_band(rng, r_inner, r_outer)) {
    total += atom.mass;
  }
  return total;
}

}  // namespace crtlab
