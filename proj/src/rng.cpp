#include "crtlab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace crtlab {

namespace {
constexpr uint32_t kMul0 = 0xD2511F53u;
constexpr uint32_t kMul1 = 0xCD9E8D57u;
constexpr uint32_t kWey0 = 0x9E3779B9u;
constexpr uint32_t kWey1 = 0xBB67AE85u;
}  // namespace

void CounterRng::refill() {
  uint32_t c0 = ctr_[0], c1 = ctr_[1], c2 = ctr_[2], c3 = ctr_[3];
  uint32_t k0 = key_[0], k1 = key_[1];
  for (int round = 0; round < 10; ++round) {
    const uint64_t p0 = static_cast<uint64_t>(kMul0) * c0;
    const uint64_t p1 = static_cast<uint64_t>(kMul1) * c2;
    const uint32_t n0 = static_cast<uint32_t>(p1 >> 32) ^ c1 ^ k0;
    const uint32_t n1 = static_cast<uint32_t>(p1);
    const uint32_t n2 = static_cast<uint32_t>(p0 >> 32) ^ c3 ^ k1;
    const uint32_t n3 = static_cast<uint32_t>(p0);
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
    k0 += kWey0;
    k1 += kWey1;
  }
  out_[0] = c0;
  out_[1] = c1;
  out_[2] = c2;
  out_[3] = c3;
  out_pos_ = 0;
  // Bump the 64-bit block counter (low two words); the stream id lives in the
  // high words, so distinct streams can never collide.
  if (++ctr_[0] == 0) ++ctr_[1];
}

uint64_t CounterRng::next_below(uint64_t n) {
  if (n == 0) throw std::invalid_argument("next_below: n must be positive");
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double exponential_sample(CounterRng& rng, double mean) {
  // u in [0,1) so log1p(-u) is finite.
  return -mean * std::log1p(-rng.next_double());
}

double normal_sample(CounterRng& rng) {
  for (;;) {
    const double u = 2.0 * rng.next_double() - 1.0;
    const double v = 2.0 * rng.next_double() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double gamma_sample(CounterRng& rng, double shape) {
  if (shape < 1.0) throw std::invalid_argument("gamma_sample: shape must be >= 1");
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal_sample(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_double();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

namespace {

uint64_t poisson_small(CounterRng& rng, double mean) {
  // Product of uniforms against exp(-mean).
  const double limit = std::exp(-mean);
  uint64_t k = 0;
  double prod = rng.next_double();
  while (prod > limit) {
    ++k;
    prod *= rng.next_double();
  }
  return k;
}

// Hörmann's PTRS transformed-rejection sampler; exact for mean >= 10.
uint64_t poisson_ptrs(CounterRng& rng, double mean) {
  const double slam = std::sqrt(mean);
  const double llam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.next_double() - 0.5;
    const double v = rng.next_double();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kf * llam - mean - std::lgamma(kf + 1.0)) {
      return static_cast<uint64_t>(kf);
    }
  }
}

}  // namespace

uint64_t poisson_sample(CounterRng& rng, double mean) {
  if (mean < 0.0 || !std::isfinite(mean)) {
    throw std::invalid_argument("poisson_sample: mean must be finite and >= 0");
  }
  if (mean == 0.0) return 0;
  if (mean < 10.0) return poisson_small(rng, mean);
  return poisson_ptrs(rng, mean);
}

}  // namespace crtlab
