// Counter RNG contract: reproducibility, stream separation, and the
// distributional helpers checked against their moment identities.

#include <cmath>
#include <cstdint>
#include <vector>

#include "crtlab/rng.hpp"
#include "doctest.h"

using namespace crtlab;

TEST_CASE("same seed and stream reproduce the sequence exactly") {
  CounterRng a(123, 7), b(123, 7);
  for (int i = 0; i < 1000; ++i) REQUIRE(a.next_u64() == b.next_u64());
}

TEST_CASE("different streams and seeds give different sequences") {
  CounterRng a(123, 0), b(123, 1), c(124, 0);
  int diff_stream = 0, diff_seed = 0;
  for (int i = 0; i < 64; ++i) {
    const uint64_t x = a.next_u64();
    diff_stream += x != b.next_u64();
    diff_seed += x != c.next_u64();
  }
  CHECK(diff_stream > 60);
  CHECK(diff_seed > 60);
}

TEST_CASE("next_double lies in [0,1) with the right first two moments") {
  CounterRng rng(9, 0);
  const size_t n = 200000;
  double s = 0.0, s2 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double u = rng.next_double();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    s += u;
    s2 += u * u;
  }
  const double mean = s / n, m2 = s2 / n;
  // sd(mean) = 1/sqrt(12 n); five sigma.
  CHECK(std::fabs(mean - 0.5) < 5.0 / std::sqrt(12.0 * n));
  CHECK(std::fabs(m2 - 1.0 / 3.0) < 5e-3);
}

TEST_CASE("next_below is bounded and roughly uniform") {
  CounterRng rng(5, 3);
  const uint64_t m = 13;
  std::vector<uint64_t> counts(m, 0);
  const size_t n = 130000;
  for (size_t i = 0; i < n; ++i) {
    const uint64_t v = rng.next_below(m);
    REQUIRE(v < m);
    counts[v] += 1;
  }
  const double expect = static_cast<double>(n) / m;
  for (uint64_t c : counts) {
    CHECK(std::fabs(static_cast<double>(c) - expect) <
          5.0 * std::sqrt(expect));
  }
}

TEST_CASE("next_bit is balanced") {
  CounterRng rng(77, 0);
  const size_t n = 100000;
  size_t ones = 0;
  for (size_t i = 0; i < n; ++i) ones += rng.next_bit();
  CHECK(std::fabs(static_cast<double>(ones) - 0.5 * n) <
        5.0 * std::sqrt(0.25 * n));
}

TEST_CASE("exponential_sample matches mean and variance") {
  CounterRng rng(11, 0);
  const size_t n = 200000;
  const double mean = 2.5;
  double s = 0.0, s2 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double x = exponential_sample(rng, mean);
    REQUIRE(x >= 0.0);
    s += x;
    s2 += x * x;
  }
  // Exp(mean): E = mean, E X^2 = 2 mean^2; five-sigma tolerances.
  CHECK(std::fabs(s / n - mean) < 5.0 * mean / std::sqrt(double(n)));
  CHECK(std::fabs(s2 / n - 2.0 * mean * mean) <
        5.0 * std::sqrt(20.0) * mean * mean / std::sqrt(double(n)));
}

TEST_CASE("normal_sample matches the first moments") {
  CounterRng rng(13, 0);
  const size_t n = 200000;
  double s = 0.0, s2 = 0.0, s4 = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double x = normal_sample(rng);
    s += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  CHECK(std::fabs(s / n) < 5.0 / std::sqrt(double(n)));
  CHECK(std::fabs(s2 / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::fabs(s4 / n - 3.0) < 5.0 * std::sqrt(96.0 / n));
}

TEST_CASE("gamma_sample matches mean and variance for shape >= 1") {
  CounterRng rng(17, 0);
  for (const double k : {1.0, 2.5, 7.0}) {
    const size_t n = 100000;
    double s = 0.0, s2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double x = gamma_sample(rng, k);
      REQUIRE(x >= 0.0);
      s += x;
      s2 += x * x;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    CHECK(std::fabs(mean - k) < 5.0 * std::sqrt(k / n));
    // Var(X^2)-based slack, loose factor.
    CHECK(std::fabs(var - k) < 6.0 * std::sqrt((2.0 * k * k + 4.0 * k) / n));
  }
}

TEST_CASE("poisson_sample matches mean and variance") {
  CounterRng rng(19, 0);
  for (const double mu : {0.4, 3.0, 40.0}) {
    const size_t n = 100000;
    double s = 0.0, s2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double x = static_cast<double>(poisson_sample(rng, mu));
      s += x;
      s2 += x * x;
    }
    const double mean = s / n;
    const double var = s2 / n - mean * mean;
    CHECK(std::fabs(mean - mu) < 5.0 * std::sqrt(mu / n));
    CHECK(std::fabs(var - mu) < 6.0 * std::sqrt((mu + 2.0 * mu * mu) / n));
  }
}
