#pragma once
// Tree geometry over a coded excursion: the path metric
// d(s,t) = h*(e[s] + e[t] - 2*min e on [s,t]), level-set views, and the
// exact ball decomposition of a level set. A block-sparse range-minimum
// index keeps queries O(block) with O(n) memory.

#include <cstdint>
#include <utility>
#include <vector>

#include "crtlab/excursion.hpp"

namespace crtlab {

class TreeIndex {
 public:
  // Non-owning: `exc` must outlive the index.
  explicit TreeIndex(const LatticeExcursion& exc);

  const LatticeExcursion& excursion() const { return *exc_; }
  size_t size() const { return exc_->heights.size(); }

  // Minimum height on the inclusive index range [min(s,t), max(s,t)].
  int32_t min_on(size_t s, size_t t) const;

  // Tree distance between the points visited at times s and t.
  double distance(size_t s, size_t t) const;

  // Maximal interval around `pos` on which the path stays strictly above
  // `floor` (pos itself must satisfy heights[pos] > floor).
  std::pair<size_t, size_t> interval_above(size_t pos, int32_t floor) const;

 private:
  const LatticeExcursion* exc_;
  size_t block_ = 64;
  std::vector<int32_t> block_min_;
  std::vector<std::vector<int32_t>> sparse_;  // sparse table over block minima
};

// Precomputed view of one level set: the visit indices at the level and the
// minima of the height path between consecutive visits. Every level-set
// statistic (balls, masses, diameters, ring masses) reads off this view.
struct LevelSetView {
  const TreeIndex* index = nullptr;
  double a = 0.0;
  int32_t level = 0;
  std::vector<size_t> visits;    // path indices, time order, half-open count
  std::vector<int32_t> gap_min;  // gap_min[i] = min height on [visits[i], visits[i+1]]

  double h() const { return index->excursion().h; }
  double visit_weight() const { return 0.5 * h(); }
  double total_mass() const { return visit_weight() * static_cast<double>(visits.size()); }
};

LevelSetView level_view(const TreeIndex& idx, double a);

// One ball of the decomposition: a maximal group of level-a visits whose
// pairwise connecting paths stay above the floor level a - r/2.
struct Ball {
  size_t begin_visit = 0, end_visit = 0;  // [begin, end) range into view.visits
  size_t first_time = 0, last_time = 0;   // path indices of first/last visit
  double mass = 0.0;
  double diameter = 0.0;

  size_t visit_count() const { return end_visit - begin_visit; }
};

struct BallDecomposition {
  double a = 0.0, r = 0.0;
  int32_t floor_level = 0;
  std::vector<Ball> balls;  // in order of first visit
  double total_mass = 0.0;  // == view.total_mass(), exactly
};

// Decomposition of the level-a set into the open balls of radius r
// (r lattice-aligned: r/(2h) a positive integer; r > 2a yields one ball).
BallDecomposition ball_decomposition(const LevelSetView& view, double r);
BallDecomposition ball_decomposition(const TreeIndex& idx, double a, double r);

// Max distance between level-a points of the ball (0 for a single class).
double ball_diameter(const LevelSetView& view, const Ball& ball);

// Path-index interval of the ball's supporting subtree (heights > floor).
std::pair<size_t, size_t> ball_interval(const LevelSetView& view,
                                        const Ball& ball, double r);

// Nested decompositions along a decreasing radius list, with the ancestor of
// every smallest-radius ball at each coarser radius.
struct BallChain {
  std::vector<double> radii;  // strictly decreasing
  std::vector<BallDecomposition> decomps;
  // ancestor[k][i] = index in decomps[k] of the ball containing ball i of
  // decomps.back() (the smallest radius).
  std::vector<std::vector<size_t>> ancestor;
};
BallChain enlarged_ball_chain(const LevelSetView& view,
                              const std::vector<double>& radii);

// Mass of the radius-r ball around the point visited at path index `pos`
// (pos must sit at the view's level). r = 0 means the equivalence class of
// the point itself, which on the lattice coincides with the radius-2h ball.
double ball_mass_at(const LevelSetView& view, size_t pos, double r);

// Level mass of the open ring between radii r_inner and r_outer around the
// point visited at `pos`; r_inner = 0 excludes exactly the point's class.
double ring_mass(const LevelSetView& view, size_t pos, double r_inner,
                 double r_outer);
double ring_mass(const TreeIndex& idx, size_t pos, double r_inner,
                 double r_outer);

// CSV export of a decomposition: one row per ball
// (a, r, ball, start, end, mass, diameter).
void write_decomposition_csv(const BallDecomposition& dec, std::ostream& os);

}  // namespace crtlab
