#pragma once
// Counter-based RNG (Philox4x32-10) plus the exact samplers shared by the
// simulation code. One independent stream per replicate index: construct
// CounterRng(seed, replicate) and the streams never overlap, so replicate
// results are reproducible regardless of thread scheduling.

#include <cstdint>

namespace crtlab {

class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t stream = 0) {
    key_[0] = static_cast<uint32_t>(seed);
    key_[1] = static_cast<uint32_t>(seed >> 32);
    ctr_[0] = 0;
    ctr_[1] = 0;
    ctr_[2] = static_cast<uint32_t>(stream);
    ctr_[3] = static_cast<uint32_t>(stream >> 32);
  }

  uint64_t next_u64() {
    if (out_pos_ >= 4) refill();
    const uint64_t lo = out_[out_pos_];
    const uint64_t hi = out_[out_pos_ + 1];
    out_pos_ += 2;
    return (hi << 32) | lo;
  }

  // Uniform double on [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Fair coin; buffered so ±1 walk steps cost ~1 ns.
  bool next_bit() {
    if (bit_count_ == 0) {
      bits_ = next_u64();
      bit_count_ = 64;
    }
    const bool b = bits_ & 1u;
    bits_ >>= 1;
    --bit_count_;
    return b;
  }

  // Uniform on {0, ..., n-1}, exact (rejection).
  uint64_t next_below(uint64_t n);

 private:
  void refill();

  uint32_t key_[2];
  uint32_t ctr_[4];
  uint32_t out_[4] = {0, 0, 0, 0};
  int out_pos_ = 4;
  uint64_t bits_ = 0;
  int bit_count_ = 0;
};

// Exponential with the given mean (inversion).
double exponential_sample(CounterRng& rng, double mean);
// Standard normal (Marsaglia polar).
double normal_sample(CounterRng& rng);
// Gamma(shape, 1) for shape >= 1 (Marsaglia–Tsang squeeze, exact rejection).
double gamma_sample(CounterRng& rng, double shape);
// Poisson(mean): product-of-uniforms inversion for small means, PTRS
// transformed rejection (exact) for large ones.
uint64_t poisson_sample(CounterRng& rng, double mean);

}  // namespace crtlab
