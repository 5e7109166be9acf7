#pragma once
// Statistical test kernel shared by every experiment: Kolmogorov-Smirnov
// variants (plain, two-sample, importance-weighted), chi-square with exact
// tail probability, dispersion and correlation checks, and bootstrap errors.

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "crtlab/rng.hpp"

namespace crtlab {
namespace stats {

using Cdf = std::function<double(double)>;

// sup_x |F_n(x) - F(x)| for an unsorted sample.
double ks_statistic(std::vector<double> sample, const Cdf& cdf);
// Same, for a sample already sorted ascending.
double ks_statistic_sorted(const std::vector<double>& sorted, const Cdf& cdf);

// Two-sample sup-distance between empirical CDFs.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

// Self-normalized weighted empirical CDF distance: F_n(x) uses weights
// w_i / sum(w). Returns the sup over the pooled sample points.
double weighted_ks(std::vector<std::pair<double, double>> sample_weight,
                   const Cdf& cdf);

// Critical value c/sqrt(n) of the asymptotic Kolmogorov law, with
// Q(c) = alpha solved numerically; ks_three_sigma uses alpha = 0.0027.
double ks_critical(size_t n, double alpha);
double ks_three_sigma(size_t n);
// Two-sample version: scales by sqrt((n+m)/(n*m)) instead of 1/sqrt(n).
double ks_critical_two_sample(size_t n, size_t m, double alpha);

// Regularized upper incomplete gamma Q(s, x); chi-square tail is
// Q(df/2, stat/2).
double regularized_gamma_q(double s, double x);

struct Chi2Result {
  double stat = 0.0;
  size_t df = 0;
  double p_value = 1.0;
};
// Pearson chi-square of observed counts against cell probabilities
// (probs need not be normalized; expected = prob/sum * total).
Chi2Result chi_square(const std::vector<uint64_t>& counts,
                      const std::vector<double>& probs);

// Sample mean and unbiased variance.
std::pair<double, double> mean_var(const std::vector<double>& xs);

// Pearson correlation; weighted version uses normalized weights.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);
double weighted_pearson(const std::vector<double>& xs,
                        const std::vector<double>& ys,
                        const std::vector<double>& ws);

// Standard error of the mean by nonparametric bootstrap.
double bootstrap_se_mean(const std::vector<double>& xs, CounterRng& rng,
                         size_t n_resample);

// Linear-interpolation quantile of a sorted sample, p in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double p);
double median(std::vector<double> xs);

// Fisher dispersion z-score for counts: the index (n-1)*s^2/mean is
// chi-square with n-1 degrees of freedom under a Poisson null.
double fisher_dispersion_z(const std::vector<double>& counts);

// Dispersion z-score against known per-observation Poisson means:
// sum (x_i - m_i)^2 / m_i is approximately chi-square with n degrees of
// freedom under the null.
double poisson_dispersion_z(const std::vector<double>& counts,
                            const std::vector<double>& means);

// (sum w)^2 / sum w^2: the equivalent unweighted sample size.
double effective_sample_size(const std::vector<double>& weights);

// Dvoretzky-Kiefer-Wolfowitz envelope half-width at confidence 1-alpha.
double dkw_bound(size_t n, double alpha);

}  // namespace stats
}  // namespace crtlab
