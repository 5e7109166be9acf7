#include "crtlab/measure.hpp"

#include <algorithm>
#include <stdexcept>

#include "crtlab/laws.hpp"

namespace crtlab {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

double sum_gauge_diameters(const BallDecomposition& dec, double h) {
  double sum = 0.0;
  for (const auto& ball : dec.balls) {
    // Single-class balls have zero diameter; the lattice cannot resolve
    // their extent below one step, so floor the gauge argument at h.
    sum += laws::gauge(std::max(ball.diameter, h));
  }
  return sum;
}

}  // namespace

double covering_sum(const LevelSetView& view, double r, CoverMode mode) {
  const BallDecomposition dec = ball_decomposition(view, r);
  if (mode == CoverMode::kRadius) {
    return static_cast<double>(dec.balls.size()) * laws::gauge(r);
  }
  return sum_gauge_diameters(dec, view.h());
}

std::vector<RatioRow> hausdorff_ratio_scan(const LevelSetView& view,
                                           const std::vector<double>& radii) {
  std::vector<RatioRow> rows;
  rows.reserve(radii.size());
  for (double r : radii) {
    const BallDecomposition dec = ball_decomposition(view, r);
    RatioRow row;
    row.r = r;
    row.ball_count = dec.balls.size();
    for (const auto& ball : dec.balls) {
      row.max_diameter = std::max(row.max_diameter, ball.diameter);
    }
    row.mass = dec.total_mass;
    row.sum_diameter = sum_gauge_diameters(dec, view.h());
    row.sum_radius = static_cast<double>(dec.balls.size()) * laws::gauge(r);
    require(row.mass > 0.0, "level set carries no mass");
    row.ratio_diameter = row.sum_diameter / row.mass;
    row.ratio_radius = row.sum_radius / row.mass;
    rows.push_back(row);
  }
  return rows;
}

double heavy_ball_mass(const BallDecomposition& dec, double y) {
  require(y >= 0.0, "threshold must be nonnegative");
  double mass = 0.0;
  for (const auto& ball : dec.balls) {
    if (ball.mass > y) mass += ball.mass;
  }
  return mass;
}

uint64_t small_ball_census(const LevelSetView& view,
                           const std::vector<double>& radii,
                           const std::vector<double>& thresholds) {
  require(radii.size() >= 2 && thresholds.size() + 1 == radii.size(),
          "need one threshold per radius above the smallest");
  for (size_t k = 0; k + 1 < thresholds.size(); ++k) {
    require(thresholds[k] > thresholds[k + 1],
            "thresholds must be strictly decreasing");
  }
  const BallChain chain = enlarged_ball_chain(view, radii);
  const size_t n_fine = chain.decomps.back().balls.size();
  uint64_t count = 0;
  for (size_t i = 0; i < n_fine; ++i) {
    bool small = true;
    for (size_t k = 0; k < thresholds.size() && small; ++k) {
      small = chain.decomps[k].balls[chain.ancestor[k][i]].mass <=
              thresholds[k];
    }
    if (small) ++count;
  }
  return count;
}

CensusResult census(const LevelSetView& view, double r, double y,
                    const std::vector<double>& radii,
                    const std::vector<double>& thresholds) {
  CensusResult res;
  res.a = view.a;
  res.r = r;
  res.y = y;
  const BallDecomposition dec = ball_decomposition(view, r);
  res.ball_count = dec.balls.size();
  res.total_mass = dec.total_mass;
  res.heavy_mass = heavy_ball_mass(dec, y);
  res.small_count = small_ball_census(view, radii, thresholds);
  res.sum_diameter = sum_gauge_diameters(dec, view.h());
  res.sum_radius = static_cast<double>(dec.balls.size()) * laws::gauge(r);
  return res;
}

DensityRatioSummary density_ratio_profile(const LevelSetView& view,
                                          const std::vector<size_t>& positions,
                                          const std::vector<double>& radii,
                                          double alpha, double kappa) {
  require(!positions.empty() && !radii.empty(), "need points and radii");
  DensityRatioSummary summary;
  summary.n_points = positions.size();
  size_t below = 0, above = 0;
  for (size_t pos : positions) {
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (double r : radii) {
      const double ratio = ball_mass_at(view, pos, r) / laws::gauge(r);
      if (first) {
        lo = hi = ratio;
        first = false;
      } else {
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
    }
    if (hi < alpha) ++below;
    if (lo > kappa) ++above;
  }
  summary.frac_below =
      static_cast<double>(below) / static_cast<double>(positions.size());
  summary.frac_above =
      static_cast<double>(above) / static_cast<double>(positions.size());
  return summary;
}

}  // namespace crtlab
