#include "crtlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crtlab {
namespace stats {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// Tail of the asymptotic Kolmogorov sup-distance law.
double kolmogorov_tail(double x) {
  if (x < 0.15) return 1.0;
  double q = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    q += (k % 2 == 1) ? term : -term;
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * q, 0.0, 1.0);
}

double kolmogorov_quantile(double alpha) {
  require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
  double lo = 0.15, hi = 5.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (kolmogorov_tail(mid) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Series expansion of the regularized lower incomplete gamma P(s, x),
// valid for x < s + 1.
double gamma_p_series(double s, double x) {
  double term = 1.0 / s, sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (s + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Lentz continued fraction for the regularized upper gamma Q(s, x),
// valid for x >= s + 1.
double gamma_q_cf(double s, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -static_cast<double>(i) * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

}  // namespace

double ks_statistic_sorted(const std::vector<double>& sorted, const Cdf& cdf) {
  require(!sorted.empty(), "empty sample");
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max(d, std::abs((i + 1.0) / n - f));
    d = std::max(d, std::abs(f - i / n));
  }
  return d;
}

double ks_statistic(std::vector<double> sample, const Cdf& cdf) {
  std::sort(sample.begin(), sample.end());
  return ks_statistic_sorted(sample, cdf);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  require(!a.empty() && !b.empty(), "empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / n - j / m));
  }
  return d;
}

double weighted_ks(std::vector<std::pair<double, double>> sample_weight,
                   const Cdf& cdf) {
  require(!sample_weight.empty(), "empty sample");
  std::sort(sample_weight.begin(), sample_weight.end());
  double total = 0.0;
  for (const auto& [x, w] : sample_weight) {
    require(w >= 0.0, "negative weight");
    total += w;
  }
  require(total > 0.0, "all weights are zero");
  double cum = 0.0, d = 0.0;
  for (const auto& [x, w] : sample_weight) {
    const double f = cdf(x);
    d = std::max(d, std::abs(cum / total - f));
    cum += w;
    d = std::max(d, std::abs(cum / total - f));
  }
  return d;
}

double ks_critical(size_t n, double alpha) {
  require(n > 0, "empty sample");
  return kolmogorov_quantile(alpha) / std::sqrt(static_cast<double>(n));
}

double ks_three_sigma(size_t n) { return ks_critical(n, 0.0027); }

double ks_critical_two_sample(size_t n, size_t m, double alpha) {
  require(n > 0 && m > 0, "empty sample");
  const double nn = static_cast<double>(n), mm = static_cast<double>(m);
  return kolmogorov_quantile(alpha) * std::sqrt((nn + mm) / (nn * mm));
}

double regularized_gamma_q(double s, double x) {
  require(s > 0.0 && x >= 0.0, "need s > 0 and x >= 0");
  if (x == 0.0) return 1.0;
  if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
  return gamma_q_cf(s, x);
}

Chi2Result chi_square(const std::vector<uint64_t>& counts,
                      const std::vector<double>& probs) {
  require(counts.size() == probs.size() && counts.size() >= 2,
          "need matching cell counts and probabilities");
  double total = 0.0, psum = 0.0;
  for (uint64_t c : counts) total += static_cast<double>(c);
  for (double p : probs) {
    require(p > 0.0, "cell probability must be positive");
    psum += p;
  }
  Chi2Result res;
  res.df = counts.size() - 1;
  for (size_t k = 0; k < counts.size(); ++k) {
    const double expected = probs[k] / psum * total;
    const double diff = static_cast<double>(counts[k]) - expected;
    res.stat += diff * diff / expected;
  }
  res.p_value = regularized_gamma_q(0.5 * static_cast<double>(res.df),
                                    0.5 * res.stat);
  return res;
}

std::pair<double, double> mean_var(const std::vector<double>& xs) {
  require(!xs.empty(), "empty sample");
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, ss / static_cast<double>(xs.size() - 1)};
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  require(xs.size() == ys.size() && xs.size() >= 2, "need paired samples");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  require(sxx > 0.0 && syy > 0.0, "degenerate sample");
  return sxy / std::sqrt(sxx * syy);
}

double weighted_pearson(const std::vector<double>& xs,
                        const std::vector<double>& ys,
                        const std::vector<double>& ws) {
  require(xs.size() == ys.size() && xs.size() == ws.size() && xs.size() >= 2,
          "need paired samples with weights");
  double total = 0.0;
  for (double w : ws) {
    require(w >= 0.0, "negative weight");
    total += w;
  }
  require(total > 0.0, "all weights are zero");
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    mx += ws[i] * xs[i];
    my += ws[i] * ys[i];
  }
  mx /= total;
  my /= total;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += ws[i] * (xs[i] - mx) * (ys[i] - my);
    sxx += ws[i] * (xs[i] - mx) * (xs[i] - mx);
    syy += ws[i] * (ys[i] - my) * (ys[i] - my);
  }
  require(sxx > 0.0 && syy > 0.0, "degenerate sample");
  return sxy / std::sqrt(sxx * syy);
}

double bootstrap_se_mean(const std::vector<double>& xs, CounterRng& rng,
                         size_t n_resample) {
  require(xs.size() >= 2 && n_resample >= 2, "sample too small");
  std::vector<double> means(n_resample);
  for (auto& m : means) {
    double sum = 0.0;
    for (size_t k = 0; k < xs.size(); ++k) {
      sum += xs[rng.next_below(xs.size())];
    }
    m = sum / static_cast<double>(xs.size());
  }
  return std::sqrt(mean_var(means).second);
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  require(!sorted.empty() && p >= 0.0 && p <= 1.0, "bad quantile request");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  return quantile_sorted(xs, 0.5);
}

double fisher_dispersion_z(const std::vector<double>& counts) {
  require(counts.size() >= 2, "sample too small");
  const auto [mean, var] = mean_var(counts);
  require(mean > 0.0, "zero mean count");
  const double df = static_cast<double>(counts.size() - 1);
  const double index = df * var / mean;
  return (index - df) / std::sqrt(2.0 * df);
}

double poisson_dispersion_z(const std::vector<double>& counts,
                            const std::vector<double>& means) {
  require(counts.size() == means.size() && !counts.empty(),
          "need one mean per count");
  double d = 0.0;
  for (size_t i = 0; i < counts.size(); ++i) {
    require(means[i] > 0.0, "means must be positive");
    d += (counts[i] - means[i]) * (counts[i] - means[i]) / means[i];
  }
  const double n = static_cast<double>(counts.size());
  return (d - n) / std::sqrt(2.0 * n);
}

double effective_sample_size(const std::vector<double>& weights) {
  double s1 = 0.0, s2 = 0.0;
  for (double w : weights) {
    require(w >= 0.0, "negative weight");
    s1 += w;
    s2 += w * w;
  }
  require(s2 > 0.0, "all weights are zero");
  return s1 * s1 / s2;
}

double dkw_bound(size_t n, double alpha) {
  require(n > 0 && alpha > 0.0 && alpha < 1.0, "bad envelope request");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

}  // namespace stats
}  // namespace crtlab
