#include "crtlab/laws.hpp"

#include <cmath>
#include <stdexcept>

namespace crtlab::laws {

namespace {
const double kSqrtPi = std::sqrt(M_PI);
const double kGaugeSup = std::exp(-1.0);  // gauge domain is (0, e^{-1})

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}
}  // namespace

double sup_tail(double a) {
  require(a > 0.0, "sup_tail: a must be positive");
  return 1.0 / a;
}

double zeta_density(double r) {
  require(r > 0.0, "zeta_density: r must be positive");
  return std::pow(r, -1.5) / (2.0 * kSqrtPi);
}

double level_mass_laplace(double a, double lambda) {
  require(a > 0.0, "level_mass_laplace: a must be positive");
  require(lambda >= 0.0, "level_mass_laplace: lambda must be >= 0");
  return lambda / (1.0 + a * lambda);
}

double ball_count_pmf(double a, double r, uint64_t k) {
  require(a > 0.0, "ball_count_pmf: a must be positive");
  require(r > 0.0 && r <= 2.0 * a, "ball_count_pmf: need 0 < r <= 2a");
  require(k >= 1, "ball_count_pmf: k must be >= 1");
  const double p = r / (2.0 * a);
  return std::pow(1.0 - p, static_cast<double>(k - 1)) * p;
}

double lambda_star_tail(double r_inner, double r_outer, double y) {
  require(r_outer > 0.0 && r_inner >= 0.0 && r_inner < r_outer,
          "lambda_star_tail: need 0 <= r_inner < r_outer");
  require(y > 0.0, "lambda_star_tail: y must be positive (use the atom for y = 0)");
  const double q = r_inner / r_outer;
  const double e = std::exp(-2.0 * y / r_outer);
  return (1.0 - q) * (1.0 - q) * (2.0 * y / r_outer) * e + (1.0 - q * q) * e;
}

double lambda_star_atom(double r_inner, double r_outer) {
  require(r_outer > 0.0 && r_inner >= 0.0 && r_inner < r_outer,
          "lambda_star_atom: need 0 <= r_inner < r_outer");
  const double q = r_inner / r_outer;
  return q * q;
}

double lambda_star_cdf(double r_inner, double r_outer, double y) {
  if (y < 0.0) return 0.0;
  if (y == 0.0) return lambda_star_atom(r_inner, r_outer);
  return 1.0 - lambda_star_tail(r_inner, r_outer, y);
}

double lambda_star_mean(double r_inner, double r_outer) {
  require(r_outer > 0.0 && r_inner >= 0.0 && r_inner < r_outer,
          "lambda_star_mean: need 0 <= r_inner < r_outer");
  return r_outer - r_inner;
}

double feller_laplace(double x, double a, double lambda) {
  require(x >= 0.0, "feller_laplace: x must be >= 0");
  require(a >= 0.0, "feller_laplace: a must be >= 0");
  require(lambda >= 0.0, "feller_laplace: lambda must be >= 0");
  return std::exp(-lambda * x / (1.0 + a * lambda));
}

double feller_hitting_bound(double x, double y, double a) {
  require(x >= 0.0 && y >= 0.0, "feller_hitting_bound: masses must be >= 0");
  require(a > 0.0, "feller_hitting_bound: a must be positive");
  const double d = std::sqrt(x) - std::sqrt(y);
  return std::exp(-d * d / a);
}

double sup_level_mass_bound(double m, double y) {
  require(m > 0.0, "sup_level_mass_bound: m must be positive");
  require(y >= 0.0, "sup_level_mass_bound: y must be >= 0");
  return (2.0 / m) * std::exp(-m * y / 2.0);
}

double gauge(double r) {
  require(r > 0.0 && r < kGaugeSup, "gauge: r must lie in (0, exp(-1))");
  return r * std::log(std::log(1.0 / r));
}

double heavy_ball_intensity(double r, double kappa, double c) {
  require(r > 0.0 && r < kGaugeSup, "heavy_ball_intensity: r must lie in (0, exp(-1))");
  require(kappa > 0.0 && c > 0.0, "heavy_ball_intensity: kappa and c must be positive");
  const double q = (kappa / c) * std::log(std::log(1.0 / r));
  return std::exp(-2.0 * q) * (2.0 * q + 1.0);
}

double small_ball_mu_bound(const std::vector<double>& radii,
                           const std::vector<double>& thresholds) {
  require(!radii.empty(), "small_ball_mu_bound: need at least one radius");
  require(thresholds.size() + 1 == radii.size(),
          "small_ball_mu_bound: need one threshold per consecutive radius pair");
  for (size_t k = 0; k + 1 < radii.size(); ++k) {
    require(radii[k] > radii[k + 1] && radii[k + 1] > 0.0,
            "small_ball_mu_bound: radii must be strictly decreasing and positive");
    require(thresholds[k] > 0.0, "small_ball_mu_bound: thresholds must be positive");
  }
  double prod = 1.0;
  for (size_t k = 0; k + 1 < radii.size(); ++k) {
    prod *= 1.0 - lambda_star_tail(radii[k + 1], radii[k], thresholds[k]);
  }
  return (5.0 / radii.back()) * std::sqrt(prod);
}

namespace {
GridSpec fill_grid(double m, double mesh) {
  GridSpec g;
  g.lo = m;
  g.hi = 1.0 / m;
  g.mesh = mesh;
  require((g.hi - g.lo) / mesh < 5e7, "grid: mesh too fine for the requested window");
  for (uint64_t k = 0;; ++k) {
    const double pt = m + static_cast<double>(k) * mesh;
    if (pt > g.hi * (1.0 + 1e-12)) break;
    g.points.push_back(pt);
  }
  return g;
}
}  // namespace

GridSpec level_grid_coarse(double r, double m) {
  require(r > 0.0, "level_grid_coarse: r must be positive");
  require(m > 0.0 && m < 1.0, "level_grid_coarse: need 0 < m < 1");
  return fill_grid(m, std::pow(r, 1.5));
}

uint64_t dyadic_block_index(int p) {
  if (p < 0 || p > 31) throw std::invalid_argument("dyadic_block_index: p must lie in [0, 31]");
  uint64_t num = 1, den = 1;
  for (int i = 0; i < p; ++i) {
    num *= 4;
    den *= 3;
  }
  return num / den;  // floor((4/3)^p), exactly
}

GridSpec level_grid_dyadic(int p, double m) {
  require(m > 0.0 && m < 1.0, "level_grid_dyadic: need 0 < m < 1");
  const uint64_t j_next = dyadic_block_index(p + 1);
  return fill_grid(m, std::pow(std::pow(2.0, -static_cast<double>(j_next)), 1.25));
}

}  // namespace crtlab::laws
