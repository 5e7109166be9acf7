#pragma once
// Lattice excursion engine: ±1-step excursion paths that code random trees.
// Space step h pairs with time step h^2/2, so the walk matches a Brownian
// motion with variance 2t and the level-a tail P(max > a) = h/a holds exactly
// on lattice-aligned levels.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "crtlab/rng.hpp"

namespace crtlab {

struct LatticeExcursion {
  std::vector<int32_t> heights;  // heights[0] = heights.back() = 0, steps ±1, >= 0
  double h = 1.0;

  double time_step() const { return 0.5 * h * h; }
  double duration() const {
    return static_cast<double>(heights.size() - 1) * time_step();
  }
  int32_t max_height() const;
  // Throws std::invalid_argument if the path is not a valid excursion.
  void validate() const;
};

// Lattice index of a level/radius value; throws if value is not an integer
// multiple of h (relative tolerance 1e-9).
int32_t level_index(double value, double h);

// Exact sampler for the excursion measure conditioned on max height > a
// (equivalently >= a on the lattice). Two phases: the ascent from 0 is the
// walk Doob-conditioned to reach a before returning (harmonic function
// x -> x), after the first visit to a the walk runs free until it hits 0.
// With `ceiling` set, every excursion above that level is collapsed to a
// two-step spike; the result is exact in law for any functional of the path
// restricted to levels <= ceiling, at a bounded expected cost.
LatticeExcursion sample_conditioned_excursion(
    double h, double a, CounterRng& rng,
    std::optional<double> ceiling = std::nullopt);

struct ExcursionSample {
  LatticeExcursion excursion;
  bool complete = true;  // false: step cap hit, tail replaced by a staircase
};

// As above with a step cap: once the path exceeds `step_limit` entries the
// sample is finished with a deterministic descent and flagged incomplete.
// Statistics that only depend on the path up to the cap stay exact.
ExcursionSample sample_conditioned_excursion_capped(
    double h, double a, CounterRng& rng, std::optional<double> ceiling,
    size_t step_limit);

// Exact marginal sampler for level-window functionals under the conditioned
// law: keeps only the sub-excursions above `floor_level` that reach a (their
// count, order and band-restricted paths have exactly the conditioned-law
// joint distribution), collapses excursions above `ceiling_level` to spikes,
// and stitches the pieces onto a deterministic staircase skeleton. The
// returned path is a valid excursion whose statistics at levels in
// (floor_level, ceiling_level] that are measurable from the a-reaching
// subtree agree in law with the full sampler; levels <= floor_level carry
// skeleton, not signal. Expected cost is bounded (no heavy duration tail).
LatticeExcursion sample_level_band_excursion(double h, double a,
                                             double floor_level,
                                             double ceiling_level,
                                             CounterRng& rng);

// Uniform tree contour: Dyck path of length 2(n-1) chosen uniformly among the
// Catalan-many contours of n-vertex rooted ordered trees (cycle lemma on a
// uniformly shuffled bridge). Returned with h = 1.
LatticeExcursion sample_uniform_tree_contour(size_t n_vertices, CounterRng& rng);

// Occupation masses per lattice level: level_mass[j] = (h/2) * #{k in
// [0, len-1) : heights[k] = j}. The half-open index range makes the co-area
// identity sum_j level_mass[j] * h = duration exact on every sample.
struct LocalTimeProfile {
  std::vector<double> level_mass;
  double h = 1.0;

  double mass_at(int32_t level) const {
    return (level >= 0 && static_cast<size_t>(level) < level_mass.size())
               ? level_mass[level]
               : 0.0;
  }
  double total() const;  // sum_j level_mass[j] * h
};

LocalTimeProfile local_time_profile(const LatticeExcursion& exc);

// Path indices k in [0, len-1) with heights[k] == level, in time order.
std::vector<size_t> level_visit_indices(const LatticeExcursion& exc,
                                        int32_t level);

// Maximal index intervals where the path sits strictly above `level`.
struct LevelInterval {
  size_t begin = 0, end = 0;  // inclusive index range with heights > level
  int32_t max_height = 0;
};
std::vector<LevelInterval> excursion_intervals_above(
    const LatticeExcursion& exc, int32_t level);

// Serialization: CSV (h header + one height per line) and a flat binary
// format (magic, h, count, int32 heights). Round trips are exact.
void write_excursion_csv(const LatticeExcursion& exc, std::ostream& os);
LatticeExcursion read_excursion_csv(std::istream& is);
void write_excursion_binary(const LatticeExcursion& exc, std::ostream& os);
LatticeExcursion read_excursion_binary(std::istream& is);

}  // namespace crtlab
