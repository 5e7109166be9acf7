#include "crtlab/excursion.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace crtlab {

namespace {

constexpr int32_t kNoCeiling = std::numeric_limits<int32_t>::max();

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_step_params(double h, double a) {
  require(h > 0.0 && h <= 1.0, "excursion sampler: h must lie in (0, 1]");
  require(a > 0.0, "excursion sampler: a must be positive");
}

// Ascent phase: from heights.back() = floor + 1, the walk conditioned to hit
// `top` before `floor` (Doob transform by the harmonic function x - floor:
// up-probability (d+1)/(2d) at displacement d). Returns false on cap.
bool walk_ascent(std::vector<int32_t>& hts, int32_t floor, int32_t top,
                 CounterRng& rng, size_t step_limit) {
  int32_t x = hts.back();
  while (x != top) {
    if (hts.size() >= step_limit) return false;
    const double d = static_cast<double>(x - floor);
    x += (rng.next_double() * 2.0 * d < d + 1.0) ? 1 : -1;
    hts.push_back(x);
  }
  return true;
}

// Free phase: plain walk from heights.back() absorbed at `floor`; excursions
// above `ceiling` are collapsed to two-step spikes (exact for levels
// <= ceiling, since such an excursion touches nothing below and returns to
// the ceiling with probability one). Returns false on cap.
bool walk_free(std::vector<int32_t>& hts, int32_t floor, int32_t ceiling,
               CounterRng& rng, size_t step_limit) {
  int32_t x = hts.back();
  while (x != floor) {
    if (hts.size() >= step_limit) return false;
    if (x == ceiling) {
      if (rng.next_bit()) {
        hts.push_back(ceiling + 1);
        hts.push_back(ceiling);
      } else {
        --x;
        hts.push_back(x);
      }
    } else {
      x += rng.next_bit() ? 1 : -1;
      hts.push_back(x);
    }
  }
  return true;
}

void finish_with_staircase(std::vector<int32_t>& hts) {
  for (int32_t x = hts.back(); x > 0;) hts.push_back(--x);
}

}  // namespace

int32_t LatticeExcursion::max_height() const {
  int32_t m = 0;
  for (int32_t v : heights) m = std::max(m, v);
  return m;
}

void LatticeExcursion::validate() const {
  require(h > 0.0 && h <= 1.0, "LatticeExcursion: h must lie in (0, 1]");
  require(!heights.empty(), "LatticeExcursion: empty path");
  require(heights.front() == 0 && heights.back() == 0,
          "LatticeExcursion: endpoints must be at level 0");
  for (size_t k = 0; k + 1 < heights.size(); ++k) {
    require(std::abs(heights[k + 1] - heights[k]) == 1,
            "LatticeExcursion: steps must be +-1");
    require(heights[k] >= 0, "LatticeExcursion: negative height");
  }
}

int32_t level_index(double value, double h) {
  require(h > 0.0, "level_index: h must be positive");
  require(value >= 0.0, "level_index: value must be >= 0");
  const double ratio = value / h;
  const double rounded = std::round(ratio);
  require(std::fabs(ratio - rounded) <= 1e-9 * std::max(1.0, std::fabs(ratio)),
          "level_index: value is not lattice-aligned (must be a multiple of h)");
  require(rounded <= 2147483000.0, "level_index: level out of range");
  return static_cast<int32_t>(rounded);
}

ExcursionSample sample_conditioned_excursion_capped(
    double h, double a, CounterRng& rng, std::optional<double> ceiling,
    size_t step_limit) {
  check_step_params(h, a);
  const int32_t j_a = level_index(a, h);
  require(j_a >= 1, "sample_conditioned_excursion: a must be >= h");
  int32_t j_c = kNoCeiling;
  if (ceiling) {
    j_c = level_index(*ceiling, h);
    require(j_c >= j_a, "sample_conditioned_excursion: ceiling must be >= a");
  }
  std::vector<int32_t> hts;
  hts.reserve(std::min<size_t>(step_limit, 4096));
  hts.push_back(0);
  hts.push_back(1);
  bool ok = walk_ascent(hts, 0, j_a, rng, step_limit);
  if (ok) ok = walk_free(hts, 0, j_c, rng, step_limit);
  if (!ok) finish_with_staircase(hts);
  return {LatticeExcursion{std::move(hts), h}, ok};
}

LatticeExcursion sample_conditioned_excursion(double h, double a,
                                              CounterRng& rng,
                                              std::optional<double> ceiling) {
  return sample_conditioned_excursion_capped(
             h, a, rng, ceiling, std::numeric_limits<size_t>::max())
      .excursion;
}

LatticeExcursion sample_level_band_excursion(double h, double a,
                                             double floor_level,
                                             double ceiling_level,
                                             CounterRng& rng) {
  check_step_params(h, a);
  const int32_t j_a = level_index(a, h);
  const int32_t j_b = level_index(floor_level, h);
  const int32_t j_c = level_index(ceiling_level, h);
  require(j_b >= 0 && j_b < j_a, "band sampler: need 0 <= floor < a");
  require(j_c >= j_a, "band sampler: need ceiling >= a");
  if (j_b == 0) return sample_conditioned_excursion(h, a, rng, ceiling_level);

  std::vector<int32_t> hts;
  hts.reserve(4096);
  for (int32_t x = 0; x <= j_b; ++x) hts.push_back(x);
  const size_t skeleton_len = hts.size();

  bool any_success = false;
  do {
    // One pass over the floor visits of an excursion that reached the floor:
    // each up-step starts a sub-excursion trial, each down-step returns with
    // the gambler's-ruin probability (j_b - 1)/j_b or kills the path at 0.
    for (;;) {
      if (rng.next_bit()) {
        const size_t seg_start = hts.size();
        hts.push_back(j_b + 1);
        int32_t x = j_b + 1;
        while (x != j_b && x != j_a) {
          x += rng.next_bit() ? 1 : -1;
          hts.push_back(x);
        }
        if (x == j_a) {
          any_success = true;
          walk_free(hts, j_b, j_c, rng, std::numeric_limits<size_t>::max());
        } else {
          // Trial never reached a: it carries no a-level structure, drop it.
          hts.resize(seg_start);
        }
      } else {
        if (rng.next_double() * j_b >= static_cast<double>(j_b - 1)) break;
      }
    }
    // Conditioning on max > a: reject whole passes with no reaching trial.
    if (!any_success) hts.resize(skeleton_len);
  } while (!any_success);

  finish_with_staircase(hts);
  return LatticeExcursion{std::move(hts), h};
}

LatticeExcursion sample_uniform_tree_contour(size_t n_vertices,
                                             CounterRng& rng) {
  require(n_vertices >= 1, "sample_uniform_tree_contour: need >= 1 vertex");
  const size_t m = n_vertices - 1;
  if (m == 0) return LatticeExcursion{{0}, 1.0};

  // Bridge with m up-steps and m+1 down-steps, shuffled uniformly; the cycle
  // lemma gives exactly one rotation that stays >= 0 until the final step.
  std::vector<int8_t> steps(2 * m + 1, -1);
  std::fill(steps.begin(), steps.begin() + static_cast<long>(m), int8_t{1});
  for (size_t i = steps.size() - 1; i > 0; --i) {
    std::swap(steps[i], steps[rng.next_below(i + 1)]);
  }
  int32_t sum = 0, min_sum = 1;
  size_t min_pos = 0;  // first index (1-based) achieving the running minimum
  for (size_t i = 0; i < steps.size(); ++i) {
    sum += steps[i];
    if (sum < min_sum) {
      min_sum = sum;
      min_pos = i + 1;
    }
  }
  std::vector<int32_t> hts;
  hts.reserve(2 * m + 1);
  hts.push_back(0);
  int32_t x = 0;
  for (size_t i = 0; i + 1 < steps.size(); ++i) {
    x += steps[(min_pos + i) % steps.size()];
    hts.push_back(x);
  }
  return LatticeExcursion{std::move(hts), 1.0};
}

LocalTimeProfile local_time_profile(const LatticeExcursion& exc) {
  LocalTimeProfile prof;
  prof.h = exc.h;
  prof.level_mass.assign(static_cast<size_t>(exc.max_height()) + 1, 0.0);
  const double w = 0.5 * exc.h;
  for (size_t k = 0; k + 1 < exc.heights.size(); ++k) {
    prof.level_mass[static_cast<size_t>(exc.heights[k])] += w;
  }
  return prof;
}

double LocalTimeProfile::total() const {
  double s = 0.0;
  for (double v : level_mass) s += v;
  return s * h;
}

std::vector<size_t> level_visit_indices(const LatticeExcursion& exc,
                                        int32_t level) {
  std::vector<size_t> out;
  for (size_t k = 0; k + 1 < exc.heights.size(); ++k) {
    if (exc.heights[k] == level) out.push_back(k);
  }
  return out;
}

std::vector<LevelInterval> excursion_intervals_above(
    const LatticeExcursion& exc, int32_t level) {
  require(level >= 0, "excursion_intervals_above: level must be >= 0");
  std::vector<LevelInterval> out;
  const auto& hts = exc.heights;
  size_t k = 0;
  while (k < hts.size()) {
    if (hts[k] > level) {
      LevelInterval iv;
      iv.begin = k;
      iv.max_height = hts[k];
      while (k + 1 < hts.size() && hts[k + 1] > level) {
        ++k;
        iv.max_height = std::max(iv.max_height, hts[k]);
      }
      iv.end = k;
      out.push_back(iv);
    }
    ++k;
  }
  return out;
}

// ---- serialization ----------------------------------------------------------

void write_excursion_csv(const LatticeExcursion& exc, std::ostream& os) {
  os << "h," << exc.h << "\n";
  for (int32_t v : exc.heights) os << v << "\n";
}

LatticeExcursion read_excursion_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("h,", 0) != 0) {
    throw std::invalid_argument("excursion csv: missing h header");
  }
  LatticeExcursion exc;
  exc.h = std::stod(line.substr(2));
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    exc.heights.push_back(static_cast<int32_t>(std::stol(line)));
  }
  exc.validate();
  return exc;
}

namespace {
constexpr char kBinaryMagic[8] = {'C', 'R', 'T', 'X', '1', 0, 0, 0};
}

void write_excursion_binary(const LatticeExcursion& exc, std::ostream& os) {
  os.write(kBinaryMagic, sizeof(kBinaryMagic));
  os.write(reinterpret_cast<const char*>(&exc.h), sizeof(double));
  const uint64_t n = exc.heights.size();
  os.write(reinterpret_cast<const char*>(&n), sizeof(uint64_t));
  os.write(reinterpret_cast<const char*>(exc.heights.data()),
           static_cast<std::streamsize>(n * sizeof(int32_t)));
}

LatticeExcursion read_excursion_binary(std::istream& is) {
  char magic[8];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kBinaryMagic, sizeof(magic)) != 0) {
    throw std::invalid_argument("excursion binary: bad magic");
  }
  LatticeExcursion exc;
  uint64_t n = 0;
  is.read(reinterpret_cast<char*>(&exc.h), sizeof(double));
  is.read(reinterpret_cast<char*>(&n), sizeof(uint64_t));
  if (!is || n == 0 || n > (1ull << 40)) {
    throw std::invalid_argument("excursion binary: bad length");
  }
  exc.heights.resize(n);
  is.read(reinterpret_cast<char*>(exc.heights.data()),
          static_cast<std::streamsize>(n * sizeof(int32_t)));
  if (!is) throw std::invalid_argument("excursion binary: truncated");
  exc.validate();
  return exc;
}

}  // namespace crtlab
