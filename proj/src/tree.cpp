#include "crtlab/tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>

namespace crtlab {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Lattice radius step count: r must be a positive multiple of 2h.
int32_t radius_steps(double r, double h) {
  const double steps = r / (2.0 * h);
  const auto j = static_cast<int32_t>(std::llround(steps));
  require(j >= 1 && std::abs(steps - j) <= 1e-9 * std::max(1.0, steps),
          "radius must be a positive multiple of 2h");
  return j;
}

}  // namespace

TreeIndex::TreeIndex(const LatticeExcursion& exc) : exc_(&exc) {
  const auto& e = exc.heights;
  require(!e.empty(), "empty excursion");
  const size_t nblocks = (e.size() + block_ - 1) / block_;
  block_min_.assign(nblocks, INT32_MAX);
  for (size_t k = 0; k < e.size(); ++k) {
    block_min_[k / block_] = std::min(block_min_[k / block_], e[k]);
  }
  // Sparse table over block minima: sparse_[j][b] = min of 2^j blocks from b.
  sparse_.push_back(block_min_);
  for (size_t len = 2; len <= nblocks; len *= 2) {
    const auto& prev = sparse_.back();
    std::vector<int32_t> row(nblocks - len + 1);
    for (size_t b = 0; b + len <= nblocks; ++b) {
      row[b] = std::min(prev[b], prev[b + len / 2]);
    }
    sparse_.push_back(std::move(row));
  }
}

int32_t TreeIndex::min_on(size_t s, size_t t) const {
  const auto& e = exc_->heights;
  if (s > t) std::swap(s, t);
  require(t < e.size(), "index out of range");
  const size_t bs = s / block_, bt = t / block_;
  if (bs == bt) {
    int32_t m = e[s];
    for (size_t k = s + 1; k <= t; ++k) m = std::min(m, e[k]);
    return m;
  }
  int32_t m = INT32_MAX;
  for (size_t k = s; k < (bs + 1) * block_; ++k) m = std::min(m, e[k]);
  for (size_t k = bt * block_; k <= t; ++k) m = std::min(m, e[k]);
  if (bs + 1 < bt) {
    // Full blocks strictly between: two overlapping power-of-two windows.
    const size_t lo = bs + 1, n = bt - lo;
    size_t lvl = 0;
    while ((size_t{2} << lvl) <= n) ++lvl;
    m = std::min(m, sparse_[lvl][lo]);
    m = std::min(m, sparse_[lvl][lo + n - (size_t{1} << lvl)]);
  }
  return m;
}

double TreeIndex::distance(size_t s, size_t t) const {
  if (s == t) return 0.0;
  const auto& e = exc_->heights;
  return exc_->h * (e[s] + e[t] - 2.0 * min_on(s, t));
}

std::pair<size_t, size_t> TreeIndex::interval_above(size_t pos,
                                                    int32_t floor) const {
  const auto& e = exc_->heights;
  require(pos < e.size() && e[pos] > floor, "position not above floor");
  size_t lo = pos;
  while (lo > 0 && e[lo - 1] > floor) {
    // Skip whole blocks that stay above the floor.
    const size_t b = (lo - 1) / block_;
    if (b * block_ < lo && block_min_[b] > floor) {
      lo = b * block_;
    } else {
      --lo;
    }
  }
  size_t hi = pos;
  while (hi + 1 < e.size() && e[hi + 1] > floor) {
    const size_t b = (hi + 1) / block_;
    const size_t bend = std::min(e.size(), (b + 1) * block_);
    if (bend - 1 > hi && block_min_[b] > floor) {
      hi = bend - 1;
    } else {
      ++hi;
    }
  }
  return {lo, hi};
}

LevelSetView level_view(const TreeIndex& idx, double a) {
  const auto& exc = idx.excursion();
  LevelSetView view;
  view.index = &idx;
  view.a = a;
  view.level = level_index(a, exc.h);
  require(view.level >= 1, "level must be at least one lattice step");
  view.visits = level_visit_indices(exc, view.level);
  if (view.visits.size() > 1) {
    view.gap_min.resize(view.visits.size() - 1);
    for (size_t i = 0; i + 1 < view.visits.size(); ++i) {
      view.gap_min[i] = idx.min_on(view.visits[i], view.visits[i + 1]);
    }
  }
  return view;
}

BallDecomposition ball_decomposition(const LevelSetView& view, double r) {
  const double h = view.h();
  const int32_t jr = radius_steps(r, h);
  // floor < 0 (r > 2a) degenerates to a single ball covering the level.
  const int32_t floor = view.level - jr;

  BallDecomposition dec;
  dec.a = view.a;
  dec.r = r;
  dec.floor_level = floor;
  const double w = view.visit_weight();

  size_t begin = 0;
  int32_t span_min = INT32_MAX;
  for (size_t i = 0; i < view.visits.size(); ++i) {
    const bool last = (i + 1 == view.visits.size());
    if (!last && view.gap_min[i] > floor) {
      span_min = std::min(span_min, view.gap_min[i]);
      continue;
    }
    Ball ball;
    ball.begin_visit = begin;
    ball.end_visit = i + 1;
    ball.first_time = view.visits[begin];
    ball.last_time = view.visits[i];
    ball.mass = w * static_cast<double>(ball.visit_count());
    ball.diameter = (ball.visit_count() > 1)
                        ? 2.0 * view.a - 2.0 * h * span_min
                        : 0.0;
    dec.balls.push_back(ball);
    begin = i + 1;
    span_min = INT32_MAX;
  }
  dec.total_mass = w * static_cast<double>(view.visits.size());
  return dec;
}

BallDecomposition ball_decomposition(const TreeIndex& idx, double a, double r) {
  return ball_decomposition(level_view(idx, a), r);
}

double ball_diameter(const LevelSetView& view, const Ball& ball) {
  if (ball.visit_count() <= 1) return 0.0;
  return view.index->distance(ball.first_time, ball.last_time);
}

std::pair<size_t, size_t> ball_interval(const LevelSetView& view,
                                        const Ball& ball, double r) {
  const int32_t floor = view.level - radius_steps(r, view.h());
  return view.index->interval_above(ball.first_time, floor);
}

BallChain enlarged_ball_chain(const LevelSetView& view,
                              const std::vector<double>& radii) {
  require(!radii.empty(), "empty radius list");
  for (size_t k = 0; k + 1 < radii.size(); ++k) {
    require(radii[k] > radii[k + 1], "radii must be strictly decreasing");
  }
  BallChain chain;
  chain.radii = radii;
  chain.decomps.reserve(radii.size());
  for (double r : radii) chain.decomps.push_back(ball_decomposition(view, r));

  const auto& fine = chain.decomps.back().balls;
  chain.ancestor.assign(radii.size(), std::vector<size_t>(fine.size()));
  for (size_t k = 0; k < radii.size(); ++k) {
    const auto& coarse = chain.decomps[k].balls;
    size_t j = 0;
    for (size_t i = 0; i < fine.size(); ++i) {
      while (coarse[j].end_visit <= fine[i].begin_visit) ++j;
      chain.ancestor[k][i] = j;
    }
  }
  return chain;
}

namespace {

// Index of `pos` in view.visits, which is sorted in time order.
size_t visit_rank(const LevelSetView& view, size_t pos) {
  const auto it =
      std::lower_bound(view.visits.begin(), view.visits.end(), pos);
  require(it != view.visits.end() && *it == pos,
          "position is not a visit of the level");
  return static_cast<size_t>(it - view.visits.begin());
}

// Count of visits within tree distance < 2h*(jr) of the visit at rank i,
// i.e. the maximal run around i whose gap minima exceed level - jr.
size_t run_count(const LevelSetView& view, size_t i, int32_t jr) {
  const int32_t floor = view.level - jr;
  size_t lo = i, hi = i;
  while (lo > 0 && view.gap_min[lo - 1] > floor) --lo;
  while (hi + 1 < view.visits.size() && view.gap_min[hi] > floor) ++hi;
  return hi - lo + 1;
}

}  // namespace

double ball_mass_at(const LevelSetView& view, size_t pos, double r) {
  const size_t i = visit_rank(view, pos);
  // Lattice distances are multiples of 2h, so the zero-radius class equals
  // the open ball of radius 2h: visits joined by paths that never dip below
  // the level.
  const int32_t jr = (r == 0.0) ? 1 : radius_steps(r, view.h());
  return view.visit_weight() * static_cast<double>(run_count(view, i, jr));
}

double ring_mass(const LevelSetView& view, size_t pos, double r_inner,
                 double r_outer) {
  require(r_outer > r_inner && r_inner >= 0.0, "need 0 <= r_inner < r_outer");
  return ball_mass_at(view, pos, r_outer) - ball_mass_at(view, pos, r_inner);
}

double ring_mass(const TreeIndex& idx, size_t pos, double r_inner,
                 double r_outer) {
  const auto& e = idx.excursion();
  require(pos < e.heights.size(), "index out of range");
  const LevelSetView view = level_view(idx, e.heights[pos] * e.h);
  return ring_mass(view, pos, r_inner, r_outer);
}

void write_decomposition_csv(const BallDecomposition& dec, std::ostream& os) {
  os << "a,r,ball,first_time,last_time,visits,mass,diameter\n";
  for (size_t b = 0; b < dec.balls.size(); ++b) {
    const auto& ball = dec.balls[b];
    os << dec.a << ',' << dec.r << ',' << b << ',' << ball.first_time << ','
       << ball.last_time << ',' << ball.visit_count() << ',' << ball.mass
       << ',' << ball.diameter << '\n';
  }
}

}  // namespace crtlab
