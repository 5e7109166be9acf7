#pragma once
// Closed-form laws, bounds and scale grids for the Brownian-tree level-set
// analysis, under the normalization where the coding excursion has variance
// 2t (so the height tail is 1/a and the duration density r^{-3/2}/(2*sqrt(pi))).
// Everything here is a pure function; the simulation side is tested against
// these values, never the other way around.

#include <cstdint>
#include <vector>

namespace crtlab::laws {

// P(tree height > a) under the excursion measure.
double sup_tail(double a);

// Density of the excursion duration under the excursion measure.
double zeta_density(double r);

// N[1 - exp(-lambda * <level-a mass>)] = lambda / (1 + a*lambda).
double level_mass_laplace(double a, double lambda);

// Number of level-a balls of radius r, conditioned on height > a:
// geometric on {1,2,...} with success probability r/(2a).
double ball_count_pmf(double a, double r, uint64_t k);

// Law of the spinal ring mass for the band (r_inner, r_outer):
// an atom (r_inner/r_outer)^2 at zero plus an absolutely continuous part.
double lambda_star_tail(double r_inner, double r_outer, double y);   // P(mass > y), y > 0
double lambda_star_atom(double r_inner, double r_outer);             // P(mass = 0)
double lambda_star_cdf(double r_inner, double r_outer, double y);    // P(mass <= y)
double lambda_star_mean(double r_inner, double r_outer);             // r_outer - r_inner

// Squared-branching (Feller) transition functional:
// E_x[exp(-lambda Y_a)] = exp(-lambda x / (1 + a*lambda)).
double feller_laplace(double x, double a, double lambda);

// Bound on hitting: starting from x, P(path touches y within time a)
// <= exp(-(sqrt(x)-sqrt(y))^2 / a); valid for both the downward (y < x)
// and upward (y > x) crossing directions.
double feller_hitting_bound(double x, double y, double a);

// N(sup over levels b of <level-b mass> > y, height > m) <= (2/m) exp(-m*y/2).
double sup_level_mass_bound(double m, double y);

// Gauge function r * log log(1/r), defined on (0, e^{-1}).
double gauge(double r);

// Mean density of heavy-ball mass: for balls of radius r at a fixed level,
// the expected mass carried by balls with mass > (kappa/c) * gauge(r), per
// unit of level mass. Equals exp(-2q) * (2q + 1) with q = (kappa/c)*loglog(1/r).
double heavy_ball_intensity(double r, double kappa, double c);

// Upper bound for the mean number of r_n-balls whose enlargements stay small:
// (5/r_n) * sqrt( prod_k P(ring mass over (r_{k+1}, r_k) <= eps_k) ).
// radii must be strictly decreasing, thresholds has one entry less.
double small_ball_mu_bound(const std::vector<double>& radii,
                           const std::vector<double>& thresholds);

// Scale grids used by the censuses. Points are {m + k*mesh} inside [m, 1/m].
struct GridSpec {
  double lo = 0.0;
  double hi = 0.0;
  double mesh = 0.0;
  std::vector<double> points;
};

// Coarse grid: mesh r^{3/2}.
GridSpec level_grid_coarse(double r, double m);

// Dyadic-block grid: radii 2^{-j} with block indices j_p = floor((4/3)^p);
// mesh for block p is (2^{-j_{p+1}})^{5/4}.
uint64_t dyadic_block_index(int p);  // exact integer 4^p / 3^p, p in [0, 31]
GridSpec level_grid_dyadic(int p, double m);

}  // namespace crtlab::laws
