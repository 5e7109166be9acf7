// Statistical kernel against hand-computed cases and published constants.

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "crtlab/rng.hpp"
#include "crtlab/stats.hpp"
#include "doctest.h"

using namespace crtlab;
using namespace crtlab::stats;

namespace {
double uniform_cdf(double x) {
  if (x < 0.0) return 0.0;
  if (x > 1.0) return 1.0;
  return x;
}
}  // namespace

TEST_CASE("ks_statistic on tiny hand cases") {
  // One point at 0.1 vs Uniform(0,1): F_n jumps 0 -> 1 there, so the
  // sup deviation is 1 - 0.1 = 0.9.
  CHECK(ks_statistic({0.1}, uniform_cdf) == doctest::Approx(0.9));
  // Points at 0.25 and 0.75: deviations are 0.25 on both sides of each
  // jump, never larger.
  CHECK(ks_statistic({0.25, 0.75}, uniform_cdf) == doctest::Approx(0.25));
  // Perfectly placed points at the quartile midpoints: sup = 0.25 still
  // (jump of 1/2 straddling the line).
  CHECK(ks_statistic({0.5}, uniform_cdf) == doctest::Approx(0.5));
}

TEST_CASE("sorted and unsorted KS agree") {
  CounterRng rng(3, 0);
  std::vector<double> xs;
  for (int i = 0; i < 500; ++i) xs.push_back(rng.next_double());
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  CHECK(ks_statistic(xs, uniform_cdf) ==
        doctest::Approx(ks_statistic_sorted(sorted, uniform_cdf)));
}

TEST_CASE("two-sample KS hand cases") {
  // Disjoint supports: empirical CDFs reach 1 and 0 at the same point.
  CHECK(ks_two_sample({0.0, 1.0}, {2.0, 3.0}) == doctest::Approx(1.0));
  // Identical samples: distance zero.
  CHECK(ks_two_sample({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) ==
        doctest::Approx(0.0));
  // Interleaved: {1,3} vs {2,4} -> sup = 1/2 at x in [1,2).
  CHECK(ks_two_sample({1.0, 3.0}, {2.0, 4.0}) == doctest::Approx(0.5));
}

TEST_CASE("weighted KS with equal weights equals the plain statistic") {
  CounterRng rng(4, 0);
  std::vector<double> xs;
  std::vector<std::pair<double, double>> wx;
  for (int i = 0; i < 300; ++i) {
    const double x = rng.next_double();
    xs.push_back(x);
    wx.push_back({x, 2.7});
  }
  CHECK(weighted_ks(wx, uniform_cdf) ==
        doctest::Approx(ks_statistic(xs, uniform_cdf)).epsilon(1e-12));
}

TEST_CASE("KS critical values match the asymptotic Kolmogorov law") {
  // Q(c) = alpha with Q the Kolmogorov tail: c(0.05) = 1.35810,
  // c(0.01) = 1.62762, c(0.0027) = 1.8177 (standard tables).
  const size_t n = 10000;
  const double root_n = std::sqrt(static_cast<double>(n));
  CHECK(ks_critical(n, 0.05) * root_n == doctest::Approx(1.35810).epsilon(1e-3));
  CHECK(ks_critical(n, 0.01) * root_n == doctest::Approx(1.62762).epsilon(1e-3));
  CHECK(ks_three_sigma(n) * root_n == doctest::Approx(1.8177).epsilon(1e-3));
  // Two-sample scaling: equal sizes n, m = n gives sqrt(2/n).
  CHECK(ks_critical_two_sample(n, n, 0.05) ==
        doctest::Approx(1.35810 * std::sqrt(2.0 / n)).epsilon(1e-3));
}

TEST_CASE("regularized gamma Q against closed forms") {
  // Q(1, x) = exp(-x).
  CHECK(regularized_gamma_q(1.0, 0.7) == doctest::Approx(std::exp(-0.7)));
  // Q(1/2, x) = erfc(sqrt(x)).
  CHECK(regularized_gamma_q(0.5, 1.0) ==
        doctest::Approx(std::erfc(1.0)).epsilon(1e-10));
  // Q(5, 5) = e^{-5} sum_{k<5} 5^k/k! = 0.44049328...
  double q55 = 0.0;
  double term = 1.0;
  for (int k = 0; k < 5; ++k) {
    q55 += term;
    term *= 5.0 / (k + 1);
  }
  q55 *= std::exp(-5.0);
  CHECK(regularized_gamma_q(5.0, 5.0) == doctest::Approx(q55).epsilon(1e-10));
  CHECK(q55 == doctest::Approx(0.4404933).epsilon(1e-6));
  // Limits.
  CHECK(regularized_gamma_q(2.0, 0.0) == doctest::Approx(1.0));
  CHECK(regularized_gamma_q(2.0, 1e3) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("chi_square on a hand case") {
  // Counts {8, 2} against equal cells: expected 5 each,
  // stat = 9/5 + 9/5 = 3.6, df = 1, p = Q(1/2, 1.8) = erfc(sqrt(1.8)).
  const Chi2Result r = chi_square({8, 2}, {1.0, 1.0});
  CHECK(r.stat == doctest::Approx(3.6));
  CHECK(r.df == 1);
  CHECK(r.p_value == doctest::Approx(std::erfc(std::sqrt(1.8))).epsilon(1e-9));
  // Unnormalized probabilities give the same answer.
  const Chi2Result r2 = chi_square({8, 2}, {0.25, 0.25});
  CHECK(r2.stat == doctest::Approx(r.stat));
  // Exact agreement with the cell law: p-value 1 at zero statistic.
  const Chi2Result r3 = chi_square({5, 5}, {1.0, 1.0});
  CHECK(r3.stat == doctest::Approx(0.0));
  CHECK(r3.p_value == doctest::Approx(1.0));
}

TEST_CASE("mean_var on a hand case") {
  const auto [m, v] = mean_var({1.0, 2.0, 3.0, 4.0});
  CHECK(m == doctest::Approx(2.5));
  CHECK(v == doctest::Approx(5.0 / 3.0));  // unbiased
}

TEST_CASE("pearson correlation hand cases") {
  CHECK(pearson({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0));
  CHECK(pearson({1, 2, 3}, {6, 4, 2}) == doctest::Approx(-1.0));
  CHECK(pearson({1, 2, 3, 4}, {1, -1, 1, -1}) ==
        doctest::Approx(-0.4472136).epsilon(1e-6));
}

TEST_CASE("weighted_pearson with equal weights equals plain pearson") {
  const std::vector<double> xs = {0.3, 1.7, 2.2, 5.0, 3.3};
  const std::vector<double> ys = {1.1, 0.4, 2.9, 2.8, 0.0};
  const std::vector<double> ws(5, 0.8);
  CHECK(weighted_pearson(xs, ys, ws) ==
        doctest::Approx(pearson(xs, ys)).epsilon(1e-12));
}

TEST_CASE("quantiles of a sorted sample") {
  const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0, 5.0};
  CHECK(quantile_sorted(xs, 0.0) == doctest::Approx(1.0));
  CHECK(quantile_sorted(xs, 1.0) == doctest::Approx(5.0));
  CHECK(quantile_sorted(xs, 0.5) == doctest::Approx(3.0));
  CHECK(quantile_sorted(xs, 0.25) == doctest::Approx(2.0));
  CHECK(median({4.0, 1.0, 3.0, 2.0, 5.0}) == doctest::Approx(3.0));
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == doctest::Approx(2.5));
}

TEST_CASE("fisher dispersion flags overdispersed counts") {
  CounterRng rng(21, 0);
  std::vector<double> poisson_counts, mixed_counts;
  for (int i = 0; i < 20000; ++i) {
    poisson_counts.push_back(
        static_cast<double>(poisson_sample(rng, 3.0)));
    // Mixture of Poisson(1) and Poisson(5): same mean 3, inflated variance.
    const double mu = rng.next_bit() ? 1.0 : 5.0;
    mixed_counts.push_back(static_cast<double>(poisson_sample(rng, mu)));
  }
  CHECK(std::fabs(fisher_dispersion_z(poisson_counts)) < 4.0);
  CHECK(fisher_dispersion_z(mixed_counts) > 10.0);
}

TEST_CASE("poisson dispersion z with known means") {
  CounterRng rng(23, 0);
  std::vector<double> counts, means;
  for (int i = 0; i < 20000; ++i) {
    const double mu = 1.0 + rng.next_double() * 4.0;
    means.push_back(mu);
    counts.push_back(static_cast<double>(poisson_sample(rng, mu)));
  }
  CHECK(std::fabs(poisson_dispersion_z(counts, means)) < 4.0);
  // Doubling every count breaks the null decisively.
  std::vector<double> doubled = counts;
  for (double& c : doubled) c *= 2.0;
  CHECK(poisson_dispersion_z(doubled, means) > 10.0);
}

TEST_CASE("effective sample size") {
  CHECK(effective_sample_size({1.0, 1.0, 1.0, 1.0}) == doctest::Approx(4.0));
  CHECK(effective_sample_size({5.0}) == doctest::Approx(1.0));
  // One dominant weight: ESS collapses toward 1.
  CHECK(effective_sample_size({100.0, 1.0, 1.0}) ==
        doctest::Approx(10404.0 / 10002.0));
}

TEST_CASE("DKW envelope half-width") {
  // sqrt(log(2/alpha) / (2n)) at n = 100, alpha = 0.05.
  CHECK(dkw_bound(100, 0.05) ==
        doctest::Approx(std::sqrt(std::log(2.0 / 0.05) / 200.0)).epsilon(1e-12));
  CHECK(dkw_bound(100, 0.05) == doctest::Approx(0.135811).epsilon(1e-4));
}

TEST_CASE("bootstrap standard error approximates sigma over root n") {
  CounterRng rng(29, 0);
  std::vector<double> xs;
  const size_t n = 2000;
  for (size_t i = 0; i < n; ++i) xs.push_back(normal_sample(rng) * 3.0);
  const double se = bootstrap_se_mean(xs, rng, 400);
  CHECK(se == doctest::Approx(3.0 / std::sqrt(double(n))).epsilon(0.15));
}
