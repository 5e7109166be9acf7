// Acceptance gate: runs the five experiments at their reference scales with a
// fixed seed and prints one PASS/FAIL line per criterion. The final
// criterion's geometry invariants are computed directly here against
// brute-force oracles. Exit status is nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "crtlab/config.hpp"
#include "crtlab/excursion.hpp"
#include "crtlab/experiments.hpp"
#include "crtlab/report.hpp"
#include "crtlab/rng.hpp"
#include "crtlab/tree.hpp"

using namespace crtlab;

namespace {

struct Criterion {
  int number = 0;
  std::string title;
  bool pass = false;
  std::string detail;
};

const TestRecord* find_record(const StatReport& rep, const std::string& id) {
  for (const auto& rec : rep.records) {
    if (rec.id == id) return &rec;
  }
  return nullptr;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

// Requires every listed record to exist and pass; reports stat/tolerance of
// the worst offender (or of the tightest passing record).
Criterion from_records(int number, const std::string& title,
                       const StatReport& rep,
                       const std::vector<std::string>& ids) {
  Criterion c;
  c.number = number;
  c.title = title;
  c.pass = true;
  std::string detail;
  for (const auto& id : ids) {
    const TestRecord* rec = find_record(rep, id);
    if (rec == nullptr) {
      c.pass = false;
      detail += id + " missing; ";
      continue;
    }
    c.pass = c.pass && rec->pass;
    // chi2 records pass on a p-value floor, KS records compare the statistic
    // against a critical value, and mean/Laplace records compare estimate
    // against expected within tolerance.
    std::string nums;
    if (rec->kind == "chi2") {
      nums = "p " + fmt(rec->estimate) + " vs floor " + fmt(rec->tolerance);
    } else if (std::isnan(rec->stat)) {
      nums = fmt(rec->estimate) + " vs " + fmt(rec->expected) + " +- " +
             fmt(rec->tolerance);
    } else {
      nums = fmt(rec->stat) + " vs " + fmt(rec->tolerance);
    }
    detail += id + (rec->pass ? " ok (" : " FAILED (") + nums + "); ";
  }
  c.detail = detail;
  return c;
}

// ---------------------------------------------------------------------------
// Criterion 11: deterministic geometry on random excursions.

int32_t brute_min(const std::vector<int32_t>& hs, size_t s, size_t t) {
  if (s > t) std::swap(s, t);
  int32_t m = hs[s];
  for (size_t k = s; k <= t; ++k) m = std::min(m, hs[k]);
  return m;
}

double brute_distance(const LatticeExcursion& exc, size_t s, size_t t) {
  return exc.h * (exc.heights[s] + exc.heights[t] -
                  2.0 * brute_min(exc.heights, s, t));
}

Criterion geometry_criterion() {
  Criterion c;
  c.number = 11;
  c.title =
      "ball decompositions partition the level set exactly and tree "
      "distances match the quadratic oracle";
  c.pass = true;
  std::string failure;

  CounterRng rng(9001, 0);
  size_t n_checked = 0;
  for (int rep = 0; rep < 1000 && c.pass; ++rep) {
    // Mix of lattice steps, levels and samplers, including paths finished
    // early by the step cap.
    const double h = (rep % 3 == 0) ? 0.125 : (rep % 3 == 1 ? 0.0625 : 0.25);
    const double a = h * static_cast<double>(2 + rep % 5);
    LatticeExcursion exc;
    if (rep % 4 == 3) {
      exc = sample_conditioned_excursion_capped(h, a, rng, std::nullopt, 512)
                .excursion;
    } else {
      exc = sample_conditioned_excursion(h, a, rng, 2.0 * a);
    }
    exc.validate();
    const TreeIndex idx(exc);
    const LevelSetView view = level_view(idx, a);
    const size_t z = view.visits.size();
    if (z == 0) {
      c.pass = false;
      failure = "empty level set";
      break;
    }

    const double r_small = 2.0 * h * static_cast<double>(1 + rep % 3);
    const double r_big = 2.0 * r_small;
    const BallDecomposition fine = ball_decomposition(view, r_small);
    const BallDecomposition coarse = ball_decomposition(view, r_big);

    // Partition: consecutive visit ranges tile [0, z) with no overlap.
    size_t cursor = 0;
    double mass_sum = 0.0;
    for (const Ball& ball : fine.balls) {
      if (ball.begin_visit != cursor || ball.end_visit <= ball.begin_visit) {
        c.pass = false;
        failure = "visit ranges do not tile the level set";
        break;
      }
      cursor = ball.end_visit;
      mass_sum += ball.mass;
      // Diameter stays below the (open) ball radius whenever the radius can
      // split the set at all.
      const double cap = std::min(r_small, 2.0 * a);
      if (ball.diameter >= cap + 1e-12) {
        c.pass = false;
        failure = "ball diameter exceeds its radius";
        break;
      }
    }
    if (!c.pass) break;
    if (cursor != z || mass_sum != fine.total_mass ||
        fine.total_mass != view.total_mass()) {
      c.pass = false;
      failure = "ball masses do not partition the level mass";
      break;
    }
    // Disjointness in the metric: adjacent balls sit at distance >= r.
    for (size_t b = 1; b < fine.balls.size(); ++b) {
      const size_t s = view.visits[fine.balls[b - 1].end_visit - 1];
      const size_t t = view.visits[fine.balls[b].begin_visit];
      if (brute_distance(exc, s, t) < r_small) {
        c.pass = false;
        failure = "adjacent balls closer than the radius";
        break;
      }
    }
    if (!c.pass) break;
    // Nesting: every fine ball lies inside exactly one coarse ball.
    for (const Ball& ball : fine.balls) {
      size_t containers = 0;
      for (const Ball& big : coarse.balls) {
        const bool inside = big.begin_visit <= ball.begin_visit &&
                            ball.end_visit <= big.end_visit;
        const bool disjoint = big.end_visit <= ball.begin_visit ||
                              ball.end_visit <= big.begin_visit;
        if (inside) ++containers;
        if (!inside && !disjoint) {
          c.pass = false;
          failure = "fine ball straddles two coarse balls";
          break;
        }
      }
      if (containers != 1) {
        c.pass = false;
        if (failure.empty()) failure = "fine ball has no unique container";
      }
      if (!c.pass) break;
    }
    ++n_checked;
  }

  // Distance oracle on short excursions (buildable by brute force).
  size_t n_pairs = 0;
  for (int rep = 0; rep < 100 && c.pass; ++rep) {
    const LatticeExcursion exc =
        rep % 2 == 0
            ? sample_uniform_tree_contour(2 + rng.next_below(255), rng)
            : sample_conditioned_excursion_capped(0.25, 0.5, rng,
                                                  std::nullopt, 500)
                  .excursion;
    if (exc.heights.size() > 512) continue;
    const TreeIndex idx(exc);
    for (int q = 0; q < 200; ++q) {
      const size_t s = rng.next_below(exc.heights.size());
      const size_t t = rng.next_below(exc.heights.size());
      const double want = brute_distance(exc, s, t);
      if (std::fabs(idx.distance(s, t) - want) > 1e-12) {
        c.pass = false;
        failure = "indexed distance disagrees with the quadratic oracle";
        break;
      }
      ++n_pairs;
    }
  }

  c.detail = c.pass ? (std::to_string(n_checked) + " excursions, " +
                       std::to_string(n_pairs) + " distance pairs, all exact")
                    : failure;
  return c;
}

ExperimentConfig default_config(const std::string& name) {
  ExperimentConfig cfg;
  cfg.experiment = name;
  cfg.seed = 1;
  cfg.threads = 0;
  cfg.out_dir = "acceptance_out";
  cfg.validate();
  return cfg;
}

}  // namespace

int main() {
  std::cout << "acceptance: reference scales, seed 1 (laws/rayknight/bismut/"
               "census at h=1/128 with 2e4 replicates, covering scan at "
               "h=1/4096 with 1e3 replicates)\n"
            << std::flush;

  std::map<std::string, StatReport> reports;
  for (const std::string name :
       {"laws", "rayknight", "bismut", "census", "hausdorff"}) {
    std::cout << "running " << name << "..." << std::flush;
    reports.emplace(name, run_experiment(default_config(name)));
    std::cout << " done\n" << std::flush;
  }
  const StatReport& laws = reports.at("laws");
  const StatReport& rayknight = reports.at("rayknight");
  const StatReport& bismut = reports.at("bismut");
  const StatReport& hausdorff = reports.at("hausdorff");

  std::vector<Criterion> criteria;
  criteria.push_back(from_records(
      1, "level-set mass under the conditioned law is exponential", laws,
      {"level_mass_ks"}));
  criteria.push_back(from_records(
      2, "ball count at radius r is geometric with success r/(2a)", laws,
      {"ball_count_chi2", "ball_count_mean"}));
  criteria.push_back(from_records(
      3, "ball masses are independent exponentials with mean r/2", laws,
      {"ball_mass_ks", "ball_mass_corr"}));
  criteria.push_back(from_records(
      4, "doubling the height threshold halves the reach probability", laws,
      {"height_tail_2x"}));
  criteria.push_back(from_records(
      5, "spinal ring-mass sampler matches its closed-form tail and atom",
      laws, {"lambda_star_tail_sup", "lambda_star_atom"}));
  criteria.push_back(from_records(
      6, "mass-weighted lattice ring masses follow the spinal law", bismut,
      {"bismut_ring_wide_atom", "bismut_ring_wide_ks",
       "bismut_ring_narrow_atom", "bismut_ring_narrow_ks",
       "bismut_cross_band_corr"}));
  criteria.push_back(from_records(
      7, "level-mass transition kernel has the branching Laplace transform",
      laws,
      {"feller_laplace_half", "feller_laplace_one", "feller_laplace_two",
       "feller_extinction"}));
  criteria.push_back(from_records(
      8, "tree-derived mass transitions match exact kernel draws per bin",
      rayknight,
      {"rayknight_bin1_ks", "rayknight_bin2_ks", "rayknight_bin3_ks",
       "rayknight_bin4_ks", "rayknight_bin5_ks", "rayknight_bin6_ks",
       "rayknight_bin7_ks", "rayknight_bin8_ks"}));

  // Criterion 9: every one-sided bound in the suite holds with margin.
  {
    Criterion c;
    c.number = 9;
    c.title = "all one-sided bound estimates stay under their bounds";
    c.pass = true;
    double worst_margin = std::numeric_limits<double>::infinity();
    std::string worst_id;
    size_t n_bounds = 0;
    for (const auto& [name, rep] : reports) {
      for (const auto& rec : rep.records) {
        if (rec.kind != "bound") continue;
        ++n_bounds;
        c.pass = c.pass && rec.pass;
        if (rec.margin < worst_margin) {
          worst_margin = rec.margin;
          worst_id = rec.id;
        }
        if (!rec.pass) c.detail += rec.id + " exceeded; ";
      }
    }
    c.detail += std::to_string(n_bounds) +
                " bounds, smallest margin " + fmt(worst_margin) + " (" +
                worst_id + ")";
    criteria.push_back(c);
  }

  // Criterion 10: covering-ratio trend. The monotone-decrease clause is
  // reported exactly as measured; see the trend records' notes for the
  // medians per radius.
  {
    Criterion c;
    c.number = 10;
    c.title =
        "covering ratios trend toward the mass (decreasing medians, j=9 "
        "window, shrinking density-ratio outliers)";
    c.pass = true;
    for (const std::string id :
         {"hausdorff_trend_diameter", "hausdorff_ratio_window",
          "hausdorff_density_below_trend", "hausdorff_density_above_trend"}) {
      const TestRecord* rec = find_record(hausdorff, id);
      if (rec == nullptr) {
        c.pass = false;
        c.detail += std::string(id) + " missing; ";
        continue;
      }
      c.pass = c.pass && rec->pass;
      c.detail += std::string(id) + (rec->pass ? " ok" : " FAILED") +
                  " [" + rec->note + "]; ";
    }
    criteria.push_back(c);
  }

  criteria.push_back(geometry_criterion());

  size_t failed = 0;
  for (const auto& c : criteria) {
    std::cout << (c.pass ? "[PASS]" : "[FAIL]") << " criterion " << c.number
              << ": " << c.title << " -- " << c.detail << "\n";
    failed += c.pass ? 0 : 1;
  }
  std::cout << (failed == 0
                    ? "acceptance: all criteria passed\n"
                    : "acceptance: " + std::to_string(failed) +
                          " criterion(s) failed\n");
  return failed == 0 ? 0 : 1;
}
