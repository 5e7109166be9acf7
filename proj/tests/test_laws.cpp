// Closed-form law layer. Where a value is a nontrivial formula, it is checked
// against an independent numerical oracle (Simpson quadrature of the defining
// integral) rather than against a re-typed copy of itself.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "crtlab/laws.hpp"
#include "doctest.h"

using namespace crtlab;

namespace {

// Composite Simpson on [lo, hi] with n (even) panels.
double simpson(const std::function<double(double)>& f, double lo, double hi,
               int n) {
  const double step = (hi - lo) / n;
  double acc = f(lo) + f(hi);
  for (int i = 1; i < n; ++i) acc += f(lo + i * step) * (i % 2 ? 4.0 : 2.0);
  return acc * step / 3.0;
}

// Simpson on a log grid: integral of f over [lo, hi] via substitution
// r = e^u, dr = r du.
double simpson_log(const std::function<double(double)>& f, double lo,
                   double hi, int n) {
  return simpson([&](double u) { return f(std::exp(u)) * std::exp(u); },
                 std::log(lo), std::log(hi), n);
}

}  // namespace

TEST_CASE("height tail and duration density hand values") {
  CHECK(laws::sup_tail(2.0) == doctest::Approx(0.5));
  CHECK(laws::sup_tail(0.25) == doctest::Approx(4.0));
  CHECK(laws::zeta_density(1.0) ==
        doctest::Approx(1.0 / (2.0 * std::sqrt(M_PI))));
  CHECK(laws::zeta_density(4.0) ==
        doctest::Approx(0.125 / (2.0 * std::sqrt(M_PI))));
}

TEST_CASE("duration density integrates against the Laplace transform") {
  // integral over r of (1 - e^{-lambda r}) * zeta(r) equals sqrt(lambda).
  // Head [0, eps]: integrand ~ lambda r * zeta(r), integral lambda*sqrt(eps/pi).
  // Tail [T, inf): integrand ~ zeta(r), integral 1/sqrt(pi T).
  for (const double lambda : {1.0, 2.0}) {
    const double eps = 1e-8, big = 1e8;
    const double mid = simpson_log(
        [&](double r) {
          return (1.0 - std::exp(-lambda * r)) * laws::zeta_density(r);
        },
        eps, big, 4000);
    const double head = lambda * std::sqrt(eps / M_PI);
    const double tail = 1.0 / std::sqrt(M_PI * big);
    CHECK(mid + head + tail ==
          doctest::Approx(std::sqrt(lambda)).epsilon(1e-3));
  }
}

TEST_CASE("level-mass Laplace exponent algebra") {
  CHECK(laws::level_mass_laplace(1.0, 1.0) == doctest::Approx(0.5));
  // Degenerate horizon is outside the domain; the exponent tends to lambda.
  CHECK(laws::level_mass_laplace(1e-12, 3.0) == doctest::Approx(3.0));
  // Branching composition: running the exponent for a then a' equals
  // running it for a + a'.
  for (const double a : {0.3, 1.0}) {
    for (const double ap : {0.5, 2.0}) {
      for (const double lam : {0.7, 4.0}) {
        CHECK(laws::level_mass_laplace(a + ap, lam) ==
              doctest::Approx(laws::level_mass_laplace(
                  a, laws::level_mass_laplace(ap, lam))));
      }
    }
  }
}

TEST_CASE("Feller transform satisfies the semigroup identity") {
  for (const double x : {0.5, 2.0}) {
    for (const double lam : {0.25, 1.0, 3.0}) {
      CHECK(laws::feller_laplace(x, 1.5, lam) ==
            doctest::Approx(laws::feller_laplace(
                x, 1.0, laws::level_mass_laplace(0.5, lam))));
      // Mean preservation: -d/dlambda at 0 equals x for any horizon.
      const double h = 1e-6;
      const double deriv =
          (1.0 - laws::feller_laplace(x, 1.5, h)) / h;
      CHECK(deriv == doctest::Approx(x).epsilon(1e-4));
    }
  }
}

TEST_CASE("ball count pmf is geometric with the right mean") {
  const double a = 1.0, r = 0.5;
  const double p = r / (2.0 * a);
  CHECK(laws::ball_count_pmf(a, r, 1) == doctest::Approx(p));
  CHECK(laws::ball_count_pmf(a, r, 3) ==
        doctest::Approx(p * (1.0 - p) * (1.0 - p)));
  double total = 0.0, mean = 0.0;
  for (uint64_t k = 1; k <= 2000; ++k) {
    const double pk = laws::ball_count_pmf(a, r, k);
    total += pk;
    mean += k * pk;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(mean == doctest::Approx(2.0 * a / r).epsilon(1e-10));
}

TEST_CASE("spinal ring-mass law: atom, tail, cdf and mean cohere") {
  const double r_in = 0.5, r_out = 2.0;
  const double q = r_in / r_out;
  CHECK(laws::lambda_star_atom(r_in, r_out) == doctest::Approx(q * q));
  // Total mass: atom plus the limit of the tail at 0+ is 1.
  CHECK(laws::lambda_star_atom(r_in, r_out) +
            laws::lambda_star_tail(r_in, r_out, 1e-12) ==
        doctest::Approx(1.0).epsilon(1e-9));
  // cdf = 1 - tail for positive arguments.
  for (const double y : {0.1, 0.7, 3.0}) {
    CHECK(laws::lambda_star_cdf(r_in, r_out, y) ==
          doctest::Approx(1.0 - laws::lambda_star_tail(r_in, r_out, y)));
  }
  // Mean = integral of the tail over (0, inf); quadrature oracle.
  const double integral =
      simpson([&](double y) { return laws::lambda_star_tail(r_in, r_out, y); },
              1e-9, 60.0, 20000);
  CHECK(integral == doctest::Approx(r_out - r_in).epsilon(1e-6));
  CHECK(laws::lambda_star_mean(r_in, r_out) == doctest::Approx(r_out - r_in));
}

TEST_CASE("hitting and level-sup bounds are the stated exponentials") {
  CHECK(laws::feller_hitting_bound(1.0, 4.0, 2.0) ==
        doctest::Approx(std::exp(-0.5)));
  CHECK(laws::feller_hitting_bound(4.0, 1.0, 2.0) ==
        doctest::Approx(std::exp(-0.5)));  // symmetric in sqrt-scale
  CHECK(laws::feller_hitting_bound(1.0, 1.0, 0.3) == doctest::Approx(1.0));
  CHECK(laws::sup_level_mass_bound(0.5, 8.0) ==
        doctest::Approx(4.0 * std::exp(-2.0)));
}

TEST_CASE("gauge function values and domain") {
  CHECK(laws::gauge(0.1) ==
        doctest::Approx(0.1 * std::log(std::log(10.0))).epsilon(1e-12));
  CHECK(laws::gauge(0.1) == doctest::Approx(0.0834032).epsilon(1e-5));
  CHECK(laws::gauge(0.25) == doctest::Approx(0.0816586).epsilon(1e-5));
  CHECK_THROWS(laws::gauge(0.5));   // log log(2) < 0: outside the domain
  CHECK_THROWS(laws::gauge(1.5));
  CHECK_THROWS(laws::gauge(0.0));
  CHECK_THROWS(laws::gauge(-1.0));
}

TEST_CASE("gauge is increasing on the working range") {
  // The gauge is only monotone below roughly 0.17; the scan radii all live
  // there, and the covering arguments rely on monotonicity on that range.
  double prev = laws::gauge(1e-7);
  for (double r = 2e-7; r <= 0.17; r *= 1.02) {
    const double g = laws::gauge(r);
    CHECK(g > prev);
    prev = g;
  }
}

TEST_CASE("heavy-ball intensity against the truncated-mean oracle") {
  // With X exponential of mean r/2 and threshold y = (kappa/c)*gauge(r),
  // the intensity is (2/r) * E[X; X > y].
  for (const double r : {0.05, 0.125}) {
    for (const double kappa : {0.4, 1.0}) {
      const double c = 2.0;
      const double y = (kappa / c) * laws::gauge(r);
      const double m = r / 2.0;
      const double oracle = simpson(
          [&](double x) { return x * std::exp(-x / m) / m; }, y, y + 40.0 * m,
          20000);
      CHECK(laws::heavy_ball_intensity(r, kappa, c) ==
            doctest::Approx((2.0 / r) * oracle).epsilon(1e-6));
    }
  }
}

TEST_CASE("small-ball mean bound") {
  // Thresholds at infinity: every ring factor is 1, leaving 5/r_n.
  CHECK(laws::small_ball_mu_bound({1.0, 0.5, 0.25}, {1e30, 1e30}) ==
        doctest::Approx(5.0 / 0.25).epsilon(1e-9));
  // Two radii, one threshold: 5 * sqrt(P(ring mass <= 1)) with the ring law
  // for (1, 2), whose tail at 1 is exactly e^{-1}.
  const double expected = 5.0 * std::sqrt(1.0 - std::exp(-1.0));
  CHECK(laws::small_ball_mu_bound({2.0, 1.0}, {1.0}) ==
        doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(3.9746).epsilon(2e-3));
  // Radii must decrease strictly.
  CHECK_THROWS(laws::small_ball_mu_bound({1.0, 1.0}, {1.0}));
}

TEST_CASE("coarse level grid") {
  const auto g = laws::level_grid_coarse(0.01, 0.5);
  CHECK(g.mesh == doctest::Approx(0.001));  // r^{3/2} at r = 0.01
  CHECK(g.lo == doctest::Approx(0.5));
  CHECK(g.hi == doctest::Approx(2.0));
  REQUIRE(!g.points.empty());
  CHECK(g.points.front() == doctest::Approx(0.5));
  CHECK(g.points.back() <= 2.0 + 1e-12);
  // Spacing is the mesh.
  CHECK(g.points[1] - g.points[0] == doctest::Approx(g.mesh));
  // Point count is at most 1/(m * mesh).
  CHECK(static_cast<double>(g.points.size()) <= 1.0 / (0.5 * 0.001) + 1e-9);
}

TEST_CASE("dyadic block indices and grid") {
  CHECK(laws::dyadic_block_index(0) == 1);
  CHECK(laws::dyadic_block_index(3) == 2);
  CHECK(laws::dyadic_block_index(5) == 4);
  CHECK(laws::dyadic_block_index(10) == 17);
  // Exact integer arithmetic: floor(4^p / 3^p).
  CHECK(laws::dyadic_block_index(20) ==
        static_cast<uint64_t>(std::pow(4.0, 20) / std::pow(3.0, 20)));

  const auto g = laws::level_grid_dyadic(2, 0.5);
  // Block 2 ends at j_3 = 2: radius 2^{-2}, mesh (2^{-2})^{5/4}.
  CHECK(g.mesh == doctest::Approx(std::pow(0.25, 1.25)));
  CHECK(g.points.front() == doctest::Approx(0.5));
  for (size_t i = 0; i + 1 < g.points.size(); ++i) {
    CHECK(g.points[i + 1] - g.points[i] == doctest::Approx(g.mesh));
  }
  CHECK(g.points.back() <= 2.0 + 1e-12);
  CHECK(static_cast<double>(g.points.size()) <= 1.0 / (0.5 * g.mesh) + 1e-9);
}
