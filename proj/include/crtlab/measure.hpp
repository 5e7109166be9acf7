#pragma once
// Covering sums, ball censuses, and density-ratio profiles over a level set:
// the quantities that compare the level-set mass measure against the
// gauge-function covering measure.

#include <cstdint>
#include <vector>

#include "crtlab/tree.hpp"

namespace crtlab {

enum class CoverMode {
  kDiameter,  // sum of gauge(ball diameter), floored at one lattice step
  kRadius,    // ball count times gauge(covering radius)
};

// Gauge covering sum of the level set at covering radius r.
double covering_sum(const LevelSetView& view, double r, CoverMode mode);

struct RatioRow {
  double r = 0.0;
  uint64_t ball_count = 0;
  double max_diameter = 0.0;
  double mass = 0.0;  // total level mass (radius-independent)
  double sum_diameter = 0.0;
  double sum_radius = 0.0;
  double ratio_diameter = 0.0;  // sum_diameter / mass
  double ratio_radius = 0.0;    // sum_radius / mass
};

// One decomposition per radius, with both covering sums and their ratios to
// the level mass.
std::vector<RatioRow> hausdorff_ratio_scan(const LevelSetView& view,
                                           const std::vector<double>& radii);

// Total mass carried by balls of the decomposition with mass strictly
// greater than y (y = 0 returns the full level mass).
double heavy_ball_mass(const BallDecomposition& dec, double y);

// Number of smallest-radius balls whose enlarged balls (their containing
// balls at each coarser radius) all have mass at or below the matching
// threshold. Radii and thresholds are strictly decreasing;
// thresholds.size() == radii.size() - 1, threshold k applying to radius k.
uint64_t small_ball_census(const LevelSetView& view,
                           const std::vector<double>& radii,
                           const std::vector<double>& thresholds);

// One full census at shared parameters: heavy mass at (r, y), small count
// over (radii, thresholds), covering sums at r.
struct CensusResult {
  double a = 0.0;
  double r = 0.0;
  double y = 0.0;
  double heavy_mass = 0.0;
  uint64_t small_count = 0;
  uint64_t ball_count = 0;
  double sum_diameter = 0.0;
  double sum_radius = 0.0;
  double total_mass = 0.0;
};
CensusResult census(const LevelSetView& view, double r, double y,
                    const std::vector<double>& radii,
                    const std::vector<double>& thresholds);

struct DensityRatioSummary {
  size_t n_points = 0;
  double frac_below = 0.0;  // points whose max ratio over radii stays < alpha
  double frac_above = 0.0;  // points whose min ratio over radii stays > kappa
};

// Ball-mass-to-gauge ratios m(B(x,r))/g(r) across the radius list for the
// level points visited at the given path positions.
DensityRatioSummary density_ratio_profile(const LevelSetView& view,
                                          const std::vector<size_t>& positions,
                                          const std::vector<double>& radii,
                                          double alpha, double kappa);

}  // namespace crtlab
