#include "crtlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "crtlab/excursion.hpp"
#include "crtlab/feller.hpp"
#include "crtlab/laws.hpp"
#include "crtlab/measure.hpp"
#include "crtlab/parallel.hpp"
#include "crtlab/spinal.hpp"
#include "crtlab/stats.hpp"
#include "crtlab/tree.hpp"

namespace crtlab {
namespace {

// Stream stride between phases: replicate k of phase p draws from stream
// p*kPhase + k, so no two phases ever share a stream.
constexpr uint64_t kPhase = uint64_t{1} << 32;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

void require_h_multiple(double h, int mult, const char* experiment) {
  const double inv = 1.0 / h;
  const double k = inv / static_cast<double>(mult);
  if (inv + 1e-9 < mult || std::fabs(k - std::round(k)) > 1e-9 * k) {
    throw ConfigError(std::string(experiment) + ": 1/h must be a multiple of " +
                      std::to_string(mult) +
                      " so every level and radius is lattice-aligned");
  }
}

double sample_se(const std::vector<double>& xs) {
  const auto [m, v] = stats::mean_var(xs);
  (void)m;
  return std::sqrt(std::max(v, 0.0) / static_cast<double>(xs.size()));
}

double proportion_se(double p, uint64_t n) {
  const double v = std::max(p * (1.0 - p), 1e-12);
  return std::sqrt(v / static_cast<double>(n));
}

// Standard error of sum(num)/sum(den) over independent replicates
// (nonparametric bootstrap over replicate indices).
double bootstrap_se_ratio(const std::vector<double>& num,
                          const std::vector<double>& den, CounterRng& rng,
                          size_t n_resample) {
  const size_t n = num.size();
  std::vector<double> ratios;
  ratios.reserve(n_resample);
  for (size_t b = 0; b < n_resample; ++b) {
    double sn = 0.0, sd = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const size_t j = static_cast<size_t>(rng.next_below(n));
      sn += num[j];
      sd += den[j];
    }
    ratios.push_back(sd > 0.0 ? sn / sd : 0.0);
  }
  const auto [m, v] = stats::mean_var(ratios);
  (void)m;
  return std::sqrt(std::max(v, 0.0));
}

TestRecord mean_record(std::string id, double est, double expected, double tol,
                       uint64_t n, std::string note,
                       std::string oracle = "closed_form") {
  TestRecord r;
  r.id = std::move(id);
  r.kind = "mean";
  r.oracle = std::move(oracle);
  r.estimate = est;
  r.expected = expected;
  r.tolerance = tol;
  r.margin = tol - std::fabs(est - expected);
  r.pass = r.margin >= 0.0;
  r.n = n;
  r.note = std::move(note);
  return r;
}

TestRecord ks_record(std::string id, double stat, double crit, uint64_t n,
                     std::string note, std::string oracle = "closed_form") {
  TestRecord r;
  r.id = std::move(id);
  r.kind = "ks";
  r.oracle = std::move(oracle);
  r.stat = stat;
  r.tolerance = crit;
  r.margin = crit - stat;
  r.pass = stat < crit;
  r.n = n;
  r.note = std::move(note);
  return r;
}

TestRecord bound_record(std::string id, double est, double bound, double slack,
                        uint64_t n, std::string note,
                        std::string oracle = "closed_form") {
  TestRecord r;
  r.id = std::move(id);
  r.kind = "bound";
  r.oracle = std::move(oracle);
  r.estimate = est;
  r.expected = bound;
  r.tolerance = slack;
  r.margin = bound + slack - est;
  r.pass = r.margin >= 0.0;
  r.n = n;
  r.note = std::move(note);
  return r;
}

TestRecord z_record(std::string id, double stat, double z_max, uint64_t n,
                    std::string note, std::string oracle = "closed_form") {
  TestRecord r;
  r.id = std::move(id);
  r.kind = "z";
  r.oracle = std::move(oracle);
  r.stat = stat;
  r.tolerance = z_max;
  r.margin = z_max - std::fabs(stat);
  r.pass = r.margin >= 0.0;
  r.n = n;
  r.note = std::move(note);
  return r;
}

TestRecord chi2_record(std::string id, const stats::Chi2Result& c,
                       double p_min, uint64_t n, std::string note) {
  TestRecord r;
  r.id = std::move(id);
  r.kind = "chi2";
  r.oracle = "closed_form";
  r.stat = c.stat;
  r.estimate = c.p_value;
  r.tolerance = p_min;
  r.margin = c.p_value - p_min;
  r.pass = r.margin >= 0.0;
  r.n = n;
  r.note = std::move(note);
  return r;
}

TestRecord trend_record(std::string id, bool pass, double est,
                        std::string note) {
  TestRecord r;
  r.id = std::move(id);
  r.kind = "trend";
  r.oracle = "trend";
  r.estimate = est;
  r.pass = pass;
  r.advisory = true;  // trend diagnostics never gate the exit status
  r.note = std::move(note);
  return r;
}

TestRecord window_record(std::string id, double est, double lo, double hi,
                         uint64_t n, std::string note) {
  TestRecord r;
  r.id = std::move(id);
  r.kind = "window";
  r.oracle = "trend";
  r.estimate = est;
  r.expected = 0.5 * (lo + hi);
  r.tolerance = 0.5 * (hi - lo);
  r.margin = r.tolerance - std::fabs(est - r.expected);
  r.pass = r.margin >= 0.0;
  r.advisory = true;
  r.n = n;
  r.note = std::move(note);
  return r;
}

stats::Cdf exponential_cdf(double mean) {
  return [mean](double x) {
    return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x / mean);
  };
}

// Index of the decomposition ball containing the given visit rank.
size_t ball_index_of_rank(const BallDecomposition& dec, size_t rank) {
  size_t lo = 0, hi = dec.balls.size();
  while (lo + 1 < hi) {
    const size_t mid = (lo + hi) / 2;
    if (dec.balls[mid].begin_visit <= rank) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::ofstream open_csv(const std::string& out_dir, const std::string& name) {
  std::filesystem::create_directories(out_dir);
  std::ofstream os(std::filesystem::path(out_dir) / name);
  if (!os) throw ConfigError("cannot write " + name + " under " + out_dir);
  return os;
}

void echo_common(StatReport& rep, const ExperimentConfig& cfg) {
  rep.config_echo["out_dir"] = cfg.out_dir;
  for (const auto& [k, v] : cfg.tolerance) {
    rep.config_echo["tolerance." + k] = fmt(v);
  }
  for (const auto& [k, v] : cfg.settings) rep.config_echo["settings." + k] = v;
}

// Expected total mass of the heavy balls of one tree on the lattice. Ball
// masses are (h/2) * G with G geometric of success 1/(2*j_r), the ball count
// is geometric with mean 2a/r, and E[G; G >= k] = x^{k-1} (k q + x) / q with
// x = 1 - q, so the expectation is exact, no continuum limit involved.
double lattice_heavy_mass_expectation(double a, double r, double y, double h) {
  const double j_r = r / (2.0 * h);
  const double q = 1.0 / (2.0 * j_r);
  const double x = 1.0 - q;
  const double k = std::floor(y / (0.5 * h)) + 1.0;  // least k with k*h/2 > y
  const double tail_mean = std::pow(x, k - 1.0) * (k * q + x) / q;
  return (2.0 * a / r) * 0.5 * h * tail_mean;
}

// ---------------------------------------------------------------------------
// laws: marginal laws of the level set and the auxiliary samplers
// ---------------------------------------------------------------------------

struct LevelBallSample {
  double level_mass = 0.0;
  uint32_t ball_count = 0;
  std::vector<double> masses;
};

struct SpinalDraw {
  double total = 0.0;
  uint32_t count = 0;
};

}  // namespace

StatReport run_laws(const ExperimentConfig& cfg) {
  const double h = cfg.h_or(1.0 / 128.0);
  require_h_multiple(h, 4, "laws");
  const uint64_t n = cfg.replicates_or(20000);
  const size_t threads = resolve_threads(cfg.threads);
  const uint64_t seed = cfg.seed;
  constexpr double a = 1.0, r = 0.5;

  StatReport rep;
  rep.experiment = "laws";
  rep.seed = seed;
  rep.h = h;
  rep.replicates = n;
  rep.threads = threads;
  echo_common(rep, cfg);
  rep.config_echo["a"] = fmt(a);
  rep.config_echo["r"] = fmt(r);

  // -- phase 0: joint level mass + ball decomposition at (a, r) -------------
  const auto ball_phase = replicate_map<LevelBallSample>(
      n, threads, seed,
      [&](CounterRng& rng, size_t) {
        const auto exc =
            sample_level_band_excursion(h, a, a - 0.5 * r, a, rng);
        const TreeIndex idx(exc);
        const auto view = level_view(idx, a);
        const auto dec = ball_decomposition(view, r);
        LevelBallSample s;
        s.level_mass = view.total_mass();
        s.ball_count = static_cast<uint32_t>(dec.balls.size());
        s.masses.reserve(dec.balls.size());
        for (const auto& b : dec.balls) s.masses.push_back(b.mass);
        return s;
      },
      0 * kPhase);

  std::vector<double> level_masses, counts, pooled, first, second;
  level_masses.reserve(n);
  counts.reserve(n);
  for (const auto& s : ball_phase) {
    level_masses.push_back(s.level_mass);
    counts.push_back(static_cast<double>(s.ball_count));
    pooled.insert(pooled.end(), s.masses.begin(), s.masses.end());
    if (s.masses.size() >= 2) {
      first.push_back(s.masses[0]);
      second.push_back(s.masses[1]);
    }
  }

  {
    const double ks = stats::ks_statistic(level_masses, exponential_cdf(a));
    rep.records.push_back(ks_record(
        "level_mass_ks", ks, cfg.tolerance_or("level_mass_ks", 0.02), n,
        "total level mass at a=" + fmt(a) + " vs exponential of mean a"));
    const auto [m, v] = stats::mean_var(level_masses);
    (void)v;
    rep.records.push_back(mean_record(
        "level_mass_mean", m, a, 3.0 * sample_se(level_masses), n,
        "lattice mean is exactly a at every step size"));
  }
  {
    constexpr size_t kCells = 13;  // counts 1..12 plus the right tail
    std::vector<uint64_t> obs(kCells, 0);
    for (double c : counts) {
      const auto k = static_cast<size_t>(c);
      obs[std::min(k - 1, kCells - 1)] += 1;
    }
    std::vector<double> probs(kCells, 0.0);
    double tail = 1.0;
    for (size_t k = 0; k + 1 < kCells; ++k) {
      probs[k] = laws::ball_count_pmf(a, r, k + 1);
      tail -= probs[k];
    }
    probs[kCells - 1] = std::max(tail, 0.0);
    const auto c2 = stats::chi_square(obs, probs);
    rep.records.push_back(
        chi2_record("ball_count_chi2", c2,
                    cfg.tolerance_or("ball_count_chi2", 0.01), n,
                    "ball count at r=" + fmt(r) +
                        " vs geometric, success r/(2a), cells 1..12 + tail"));
    const auto [cm, cv] = stats::mean_var(counts);
    (void)cv;
    const double expected_count = 2.0 * a / r;
    rep.records.push_back(mean_record(
        "ball_count_mean", cm, expected_count,
        0.02 * expected_count + 3.0 * sample_se(counts), n,
        "expected count 2a/r, tolerance 2 percent plus 3 sigma"));
  }
  {
    const double ks = stats::ks_statistic(pooled, exponential_cdf(0.5 * r));
    rep.records.push_back(ks_record(
        "ball_mass_ks", ks, cfg.tolerance_or("ball_mass_ks", 0.02),
        pooled.size(),
        "pooled ball masses vs exponential of mean r/2, all balls"));
    const auto [pm, pv] = stats::mean_var(pooled);
    (void)pv;
    rep.records.push_back(mean_record(
        "ball_mass_mean", pm, 0.5 * r, 3.0 * sample_se(pooled), pooled.size(),
        "lattice ball-mass mean is exactly r/2"));
    const double rho = stats::pearson(first, second);
    rep.records.push_back(z_record(
        "ball_mass_corr", rho, 3.0 / std::sqrt(static_cast<double>(first.size())),
        first.size(),
        "correlation of the first two ball masses given two or more balls"));
  }

  // -- phases 1-3: exact height-tail ratios ---------------------------------
  {
    const double h_tail = std::max(h, 1.0 / 64.0);
    struct TailSpec {
      double m, top;
      const char* id;
      uint64_t phase;
    };
    const TailSpec tails[] = {{1.0, 2.0, "height_tail_2x", 1},
                              {1.0, 4.0, "height_tail_4x", 2},
                              {0.5, 1.0, "height_tail_half", 3}};
    const uint64_t n_tail = 5 * n;
    for (const auto& t : tails) {
      const int32_t j_top = level_index(t.top, h_tail);
      const auto hits = replicate_map<uint8_t>(
          n_tail, threads, seed,
          [&](CounterRng& rng, size_t) {
            const auto exc = sample_level_band_excursion(
                h_tail, t.m, t.m - h_tail, t.top, rng);
            return static_cast<uint8_t>(exc.max_height() >= j_top ? 1 : 0);
          },
          t.phase * kPhase);
      double p = 0.0;
      for (uint8_t v : hits) p += v;
      p /= static_cast<double>(n_tail);
      rep.records.push_back(mean_record(
          t.id, p, t.m / t.top, 3.0 * proportion_se(p, n_tail), n_tail,
          "P(max > " + fmt(t.top) + " | max > " + fmt(t.m) +
              "), exact ratio m/a on the lattice, h=" + fmt(h_tail)));
    }
  }

  // -- phase 4: duration density over a fixed window ------------------------
  {
    const double h_dur = std::max(h, 1.0 / 32.0);
    const uint64_t n_dur = 25 * n;
    const auto limit = static_cast<size_t>(9.0 / (0.5 * h_dur * h_dur));
    const auto durations = replicate_map<double>(
        n_dur, threads, seed,
        [&](CounterRng& rng, size_t) {
          const auto s = sample_conditioned_excursion_capped(
              h_dur, h_dur, rng, std::nullopt, limit);
          return s.complete ? s.excursion.duration() : -1.0;
        },
        4 * kPhase);
    const double edges[] = {1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0};
    std::vector<uint64_t> obs(6, 0);
    for (double d : durations) {
      if (d < edges[0] || d >= edges[6]) continue;
      const auto bin = static_cast<size_t>((d - edges[0]) / 0.5);
      obs[std::min<size_t>(bin, 5)] += 1;
    }
    std::vector<double> probs(6, 0.0);
    for (size_t k = 0; k < 6; ++k) {
      probs[k] = 2.0 * (1.0 / std::sqrt(edges[k]) - 1.0 / std::sqrt(edges[k + 1]));
    }
    uint64_t n_win = 0;
    for (uint64_t c : obs) n_win += c;
    const auto c2 = stats::chi_square(obs, probs);
    auto recd = chi2_record(
        "duration_density_chi2", c2,
        cfg.tolerance_or("duration_density_chi2", 0.01), n_win,
        "tree duration on [1,4] vs the r^(-3/2) density, h=" + fmt(h_dur));
    if (n_win < 600) {
      recd.advisory = true;
      recd.note += "; window count too small to be conclusive";
    }
    rep.records.push_back(recd);
  }

  // -- phase 5: ring-mass sampler marginals ----------------------------------
  {
    const double r_in = 1.0, r_out = 2.0;
    const uint64_t n_ls = 50 * n;
    const auto draws = replicate_map<SpinalDraw>(
        n_ls, threads, seed,
        [&](CounterRng& rng, size_t) {
          const auto atoms = sample_spinal_band(rng, r_in, r_out);
          SpinalDraw d;
          d.count = static_cast<uint32_t>(atoms.size());
          for (const auto& at : atoms) d.total += at.mass;
          return d;
        },
        5 * kPhase);

    double sup_dev = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double y = 0.25 * k;
      uint64_t gt = 0;
      for (const auto& d : draws) gt += d.total > y;
      const double p_hat = static_cast<double>(gt) / static_cast<double>(n_ls);
      sup_dev = std::max(sup_dev,
                         std::fabs(p_hat - laws::lambda_star_tail(r_in, r_out, y)));
    }
    rep.records.push_back(ks_record(
        "lambda_star_tail_sup", sup_dev, stats::dkw_bound(n_ls, 0.0027), n_ls,
        "sup tail deviation on a 20-point grid vs the DKW envelope, band (" +
            fmt(r_in) + ", " + fmt(r_out) + ")"));

    uint64_t zeros = 0;
    std::vector<double> totals, atom_counts;
    totals.reserve(n_ls);
    atom_counts.reserve(n_ls);
    for (const auto& d : draws) {
      zeros += d.count == 0;
      totals.push_back(d.total);
      atom_counts.push_back(static_cast<double>(d.count));
    }
    const double p0 = static_cast<double>(zeros) / static_cast<double>(n_ls);
    rep.records.push_back(mean_record(
        "lambda_star_atom", p0, laws::lambda_star_atom(r_in, r_out),
        3.0 * proportion_se(p0, n_ls), n_ls,
        "mass of the zero atom (r_in/r_out)^2"));
    const auto [tm, tv] = stats::mean_var(totals);
    (void)tv;
    rep.records.push_back(mean_record("lambda_star_mean", tm,
                                      laws::lambda_star_mean(r_in, r_out),
                                      3.0 * sample_se(totals), n_ls,
                                      "mean ring mass r_out - r_in"));
    const auto [km, kv] = stats::mean_var(atom_counts);
    (void)kv;
    rep.records.push_back(mean_record(
        "spinal_count_mean", km, 2.0 * std::log(r_out / r_in),
        3.0 * sample_se(atom_counts), n_ls, "branch-point count mean"));
    rep.records.push_back(z_record(
        "spinal_count_dispersion", stats::fisher_dispersion_z(atom_counts),
        cfg.tolerance_or("spinal_count_dispersion", 3.5), n_ls,
        "Poisson dispersion of the branch-point counts"));
  }

  // -- phases 6-9: branching transition kernel -------------------------------
  {
    const double x0 = 1.0, dt = 1.0;
    const uint64_t n_f = 50 * n;
    const auto draws = replicate_map<double>(
        n_f, threads, seed,
        [&](CounterRng& rng, size_t) {
          return feller_transition_sample(rng, x0, dt);
        },
        6 * kPhase);
    const auto [fm, fv] = stats::mean_var(draws);
    (void)fv;
    rep.records.push_back(mean_record(
        "feller_mean", fm, x0, 3.0 * sample_se(draws), n_f,
        "one-step mass transition is mean-preserving"));
    const double lambdas[] = {0.5, 1.0, 2.0};
    const char* ids[] = {"feller_laplace_half", "feller_laplace_one",
                         "feller_laplace_two"};
    for (int i = 0; i < 3; ++i) {
      std::vector<double> tr(draws.size());
      for (size_t k = 0; k < draws.size(); ++k) {
        tr[k] = std::exp(-lambdas[i] * draws[k]);
      }
      const auto [em, ev] = stats::mean_var(tr);
      (void)ev;
      CounterRng boot(seed, (60 + static_cast<uint64_t>(i)) * kPhase);
      const double se = stats::bootstrap_se_mean(tr, boot, 100);
      rep.records.push_back(mean_record(
          ids[i], em, laws::feller_laplace(x0, dt, lambdas[i]), 3.0 * se, n_f,
          "Laplace transform at lambda=" + fmt(lambdas[i]) +
              ", 3 sigma bootstrap"));
    }

    const uint64_t n_e = 5 * n;
    const auto extinct = replicate_map<uint8_t>(
        n_e, threads, seed,
        [&](CounterRng& rng, size_t) {
          const auto path = feller_path(rng, x0, 8, dt / 8.0);
          return static_cast<uint8_t>(path.values.back() == 0.0 ? 1 : 0);
        },
        7 * kPhase);
    double pe = 0.0;
    for (uint8_t e : extinct) pe += e;
    pe /= static_cast<double>(n_e);
    rep.records.push_back(mean_record(
        "feller_extinction", pe, feller_extinction(x0, dt),
        3.0 * proportion_se(pe, n_e), n_e,
        "extinction by horizon t along an 8-step path"));

    const uint64_t n_s = 10 * n;
    const auto semi = replicate_map<std::pair<double, double>>(
        n_s, threads, seed,
        [&](CounterRng& rng, size_t) {
          const double one = feller_transition_sample(rng, x0, dt);
          const double two = feller_transition_sample(
              rng, feller_transition_sample(rng, x0, 0.5 * dt), 0.5 * dt);
          return std::make_pair(one, two);
        },
        8 * kPhase);
    std::vector<double> one(n_s), two(n_s);
    for (size_t k = 0; k < n_s; ++k) {
      one[k] = semi[k].first;
      two[k] = semi[k].second;
    }
    rep.records.push_back(ks_record(
        "feller_semigroup_ks", stats::ks_two_sample(one, two),
        stats::ks_critical_two_sample(n_s, n_s, 0.0027), n_s,
        "one step of dt vs two steps of dt/2, two-sample"));

    const auto grid = replicate_map<std::pair<double, double>>(
        n_s, threads, seed,
        [&](CounterRng& rng, size_t) {
          const double coarse = feller_transition_sample(rng, x0, dt);
          double fine = x0;
          for (int s = 0; s < 8; ++s) {
            fine = feller_transition_sample(rng, fine, dt / 8.0);
          }
          return std::make_pair(coarse, fine);
        },
        9 * kPhase);
    std::vector<double> coarse(n_s), fine(n_s);
    for (size_t k = 0; k < n_s; ++k) {
      coarse[k] = grid[k].first;
      fine[k] = grid[k].second;
    }
    rep.records.push_back(ks_record(
        "feller_grid_ks", stats::ks_two_sample(coarse, fine),
        stats::ks_critical_two_sample(n_s, n_s, 0.0027), n_s,
        "one step vs eight sub-steps at the same horizon, two-sample"));
  }

  return rep;
}

// ---------------------------------------------------------------------------
// rayknight: the level-mass flow across levels
// ---------------------------------------------------------------------------

namespace {
struct FlowSample {
  double x = 0.0;       // level mass at a
  double y = 0.0;       // level mass at a + delta
  double kernel = 0.0;  // transition-kernel draw started from x
  double inc1 = 0.0, inc2 = 0.0;
  uint8_t has_pair = 0;
};
}  // namespace

StatReport run_rayknight(const ExperimentConfig& cfg) {
  const double h = cfg.h_or(1.0 / 128.0);
  require_h_multiple(h, 4, "rayknight");
  const uint64_t n = cfg.replicates_or(20000);
  const size_t threads = resolve_threads(cfg.threads);
  const uint64_t seed = cfg.seed;
  constexpr double a = 1.0, delta = 0.5, r = 0.5;

  StatReport rep;
  rep.experiment = "rayknight";
  rep.seed = seed;
  rep.h = h;
  rep.replicates = n;
  rep.threads = threads;
  echo_common(rep, cfg);
  rep.config_echo["a"] = fmt(a);
  rep.config_echo["delta"] = fmt(delta);
  rep.config_echo["r"] = fmt(r);

  const auto flow = replicate_map<FlowSample>(
      n, threads, seed,
      [&](CounterRng& rng, size_t) {
        const auto exc =
            sample_level_band_excursion(h, a, a - 0.5 * r, a + delta, rng);
        const TreeIndex idx(exc);
        const auto view_a = level_view(idx, a);
        const auto view_b = level_view(idx, a + delta);
        FlowSample s;
        s.x = view_a.total_mass();
        s.y = view_b.total_mass();
        const auto dec = ball_decomposition(view_a, r);
        if (dec.balls.size() >= 2) {
          s.has_pair = 1;
          const double w = view_a.visit_weight();
          for (int b = 0; b < 2; ++b) {
            const auto& ball = dec.balls[b];
            const auto iv = ball_interval(view_a, ball, r);
            const auto lo = std::lower_bound(view_b.visits.begin(),
                                             view_b.visits.end(), iv.first);
            const auto hi =
                std::upper_bound(lo, view_b.visits.end(), iv.second);
            const double up_mass = w * static_cast<double>(hi - lo);
            (b == 0 ? s.inc1 : s.inc2) = up_mass - ball.mass;
          }
        }
        s.kernel = feller_transition_sample(rng, s.x, delta);
        return s;
      },
      0 * kPhase);

  // Quantile bins on the initial mass; within each bin the observed evolved
  // masses and the kernel draws (matched to the same initial masses) are
  // compared by a two-sample KS test.
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
    return flow[i].x < flow[j].x || (flow[i].x == flow[j].x && i < j);
  });
  constexpr size_t kBins = 8;
  const double bin_tol = cfg.tolerance_or("rayknight_bin_ks", 0.05);
  for (size_t b = 0; b < kBins; ++b) {
    const size_t lo = n * b / kBins, hi = n * (b + 1) / kBins;
    std::vector<double> ys, ks;
    ys.reserve(hi - lo);
    ks.reserve(hi - lo);
    double x_lo = 0.0, x_hi = 0.0;
    for (size_t i = lo; i < hi; ++i) {
      const auto& s = flow[order[i]];
      ys.push_back(s.y);
      ks.push_back(s.kernel);
    }
    if (hi > lo) {
      x_lo = flow[order[lo]].x;
      x_hi = flow[order[hi - 1]].x;
    }
    const std::string id = "rayknight_bin" + std::to_string(b + 1) + "_ks";
    const std::string note = "initial-mass bin [" + fmt(x_lo) + ", " +
                             fmt(x_hi) + "], evolved mass vs kernel, dt=" +
                             fmt(delta);
    if (ys.size() < 500) {
      TestRecord rec = ks_record(id, std::numeric_limits<double>::quiet_NaN(),
                                 bin_tol, ys.size(),
                                 note + "; fewer than 500 samples, not evaluated");
      rec.pass = false;
      rec.advisory = true;
      rep.records.push_back(rec);
      continue;
    }
    rep.records.push_back(ks_record(
        id, stats::ks_two_sample(ys, ks), bin_tol, ys.size(), note));
  }

  {
    std::vector<double> inc1, inc2, ys;
    ys.reserve(n);
    for (const auto& s : flow) {
      ys.push_back(s.y);
      if (s.has_pair) {
        inc1.push_back(s.inc1);
        inc2.push_back(s.inc2);
      }
    }
    const double rho = stats::pearson(inc1, inc2);
    rep.records.push_back(z_record(
        "rayknight_crossball_corr", rho,
        3.0 / std::sqrt(static_cast<double>(inc1.size())), inc1.size(),
        "mass increments of the first two balls over delta=" + fmt(delta)));
    const auto [ym, yv] = stats::mean_var(ys);
    (void)yv;
    rep.records.push_back(mean_record(
        "rayknight_martingale", ym, a, 3.0 * sample_se(ys), n,
        "evolved total mass keeps mean a exactly on the lattice"));
  }

  // Hitting bounds for the mass flow, on a fine path grid; the coarse grid
  // value is reported alongside to document the refinement drift.
  {
    const double x0 = 1.0, horizon = 1.0;
    const double y_low[] = {0.04, 0.16, 0.36};
    const double y_high[] = {2.25, 4.0};
    struct HitSample {
      uint8_t lo_fine[3] = {0, 0, 0}, lo_coarse[3] = {0, 0, 0};
      uint8_t hi_fine[2] = {0, 0}, hi_coarse[2] = {0, 0};
    };
    const auto hits = replicate_map<HitSample>(
        n, threads, seed,
        [&](CounterRng& rng, size_t) {
          HitSample s;
          const auto scan = [&](size_t steps, uint8_t* lo_out, uint8_t* hi_out) {
            const auto path =
                feller_path(rng, x0, steps, horizon / static_cast<double>(steps));
            double mn = x0, mx = x0;
            for (size_t k = 1; k < path.values.size(); ++k) {
              mn = std::min(mn, path.values[k]);
              mx = std::max(mx, path.values[k]);
            }
            for (int i = 0; i < 3; ++i) lo_out[i] = mn <= y_low[i];
            for (int i = 0; i < 2; ++i) hi_out[i] = mx >= y_high[i];
          };
          scan(16, s.lo_coarse, s.hi_coarse);
          scan(128, s.lo_fine, s.hi_fine);
          return s;
        },
        1 * kPhase);
    const auto frac = [&](auto pick) {
      double p = 0.0;
      for (const auto& s : hits) p += pick(s);
      return p / static_cast<double>(n);
    };
    for (int i = 0; i < 3; ++i) {
      const double pf = frac([&](const HitSample& s) { return s.lo_fine[i]; });
      const double pc = frac([&](const HitSample& s) { return s.lo_coarse[i]; });
      rep.records.push_back(bound_record(
          "rayknight_hit_low_" + std::to_string(i + 1), pf,
          laws::feller_hitting_bound(x0, y_low[i], horizon),
          3.0 * proportion_se(pf, n), n,
          "P(path dips to " + fmt(y_low[i]) + "); grid 16 steps: " + fmt(pc) +
              ", 128 steps: " + fmt(pf) +
              " (grid extrema understate the continuum, bound is one-sided)"));
    }
    for (int i = 0; i < 2; ++i) {
      const double pf = frac([&](const HitSample& s) { return s.hi_fine[i]; });
      const double pc = frac([&](const HitSample& s) { return s.hi_coarse[i]; });
      rep.records.push_back(bound_record(
          "rayknight_hit_high_" + std::to_string(i + 1), pf,
          laws::feller_hitting_bound(x0, y_high[i], horizon),
          3.0 * proportion_se(pf, n), n,
          "P(path climbs to " + fmt(y_high[i]) + "); grid 16 steps: " +
              fmt(pc) + ", 128 steps: " + fmt(pf) +
              " (grid extrema understate the continuum, bound is one-sided)"));
    }
  }

  return rep;
}

// ---------------------------------------------------------------------------
// bismut: ring masses around a mass-weighted level point
// ---------------------------------------------------------------------------

namespace {
struct RingSample {
  double w = 0.0;
  double wide = 0.0;
  double narrow = 0.0;
};
}  // namespace

StatReport run_bismut(const ExperimentConfig& cfg) {
  const double h = cfg.h_or(1.0 / 128.0);
  require_h_multiple(h, 8, "bismut");
  const uint64_t n = cfg.replicates_or(20000);
  const size_t threads = resolve_threads(cfg.threads);
  const uint64_t seed = cfg.seed;
  constexpr double a = 1.0;
  constexpr double wide_in = 0.5, wide_out = 1.0;
  constexpr double narrow_in = 0.25, narrow_out = 0.5;

  StatReport rep;
  rep.experiment = "bismut";
  rep.seed = seed;
  rep.h = h;
  rep.replicates = n;
  rep.threads = threads;
  echo_common(rep, cfg);
  rep.config_echo["a"] = fmt(a);
  rep.config_echo["bands"] = "(0.5,1) and (0.25,0.5)";

  const auto rings = replicate_map<RingSample>(
      n, threads, seed,
      [&](CounterRng& rng, size_t) {
        const auto exc =
            sample_level_band_excursion(h, a, a - 0.5 * wide_out, a, rng);
        const TreeIndex idx(exc);
        const auto view = level_view(idx, a);
        RingSample s;
        s.w = view.total_mass();
        const size_t u =
            static_cast<size_t>(rng.next_below(view.visits.size()));
        const size_t pos = view.visits[u];
        s.wide = ring_mass(view, pos, wide_in, wide_out);
        s.narrow = ring_mass(view, pos, narrow_in, narrow_out);
        return s;
      },
      0 * kPhase);

  std::vector<double> w(n), wide(n), narrow(n), w_wide(n), w_narrow(n);
  for (size_t i = 0; i < n; ++i) {
    w[i] = rings[i].w;
    wide[i] = rings[i].wide;
    narrow[i] = rings[i].narrow;
    w_wide[i] = rings[i].w * rings[i].wide;
    w_narrow[i] = rings[i].w * rings[i].narrow;
  }
  const double ess = stats::effective_sample_size(w);
  const double ks_tol = cfg.tolerance_or("bismut_ring_ks", 0.05);

  // The ring law mixes an atom at zero with a continuous part, so the atom
  // is checked as a weighted proportion and the KS test runs on the
  // conditional law given a positive mass.
  const auto weighted_band = [&](const std::string& band,
                                 const std::vector<double>& vals,
                                 const std::vector<double>& w_vals,
                                 double r_in, double r_out, uint64_t aux) {
    const double atom = laws::lambda_star_atom(r_in, r_out);
    double sw_zero = 0.0, sn = 0.0, sd = 0.0;
    std::vector<std::pair<double, double>> positive;
    positive.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      if (vals[i] > 0.0) {
        positive.emplace_back(vals[i], w[i]);
      } else {
        sw_zero += w[i];
      }
      sn += w_vals[i];
      sd += w[i];
    }
    const double atom_hat = sw_zero / sd;
    rep.records.push_back(mean_record(
        "bismut_ring_" + band + "_atom", atom_hat, atom,
        3.0 * std::sqrt(std::max(atom_hat * (1.0 - atom_hat), 1e-12) / ess), n,
        "weighted fraction of empty rings vs the zero atom (r_in/r_out)^2"));
    const auto cdf = [r_in, r_out, atom](double y) {
      return (laws::lambda_star_cdf(r_in, r_out, y) - atom) / (1.0 - atom);
    };
    const size_t n_pos = positive.size();
    rep.records.push_back(ks_record(
        "bismut_ring_" + band + "_ks",
        stats::weighted_ks(std::move(positive), cdf), ks_tol, n_pos,
        "mass-weighted ring mass over (" + fmt(r_in) + ", " + fmt(r_out) +
            ") given nonempty, vs the continuous part of the ring law; ESS=" +
            fmt(ess)));
    CounterRng boot(seed, (70 + aux) * kPhase);
    const double se = bootstrap_se_ratio(w_vals, w, boot, 200);
    rep.records.push_back(mean_record(
        "bismut_ring_" + band + "_mean", sn / sd,
        laws::lambda_star_mean(r_in, r_out), 3.0 * se, n,
        "weighted mean ring mass r_out - r_in, 3 sigma bootstrap"));
  };
  weighted_band("wide", wide, w_wide, wide_in, wide_out, 0);
  weighted_band("narrow", narrow, w_narrow, narrow_in, narrow_out, 1);

  const double rho = stats::weighted_pearson(wide, narrow, w);
  rep.records.push_back(z_record(
      "bismut_cross_band_corr", rho, 3.0 / std::sqrt(std::max(ess, 1.0)), n,
      "weighted correlation between disjoint ring bands"));
  {
    TestRecord rec;
    rec.id = "bismut_ess";
    rec.kind = "count";
    rec.oracle = "derived";
    rec.estimate = ess;
    rec.tolerance = static_cast<double>(n) / 10.0;
    rec.margin = ess - rec.tolerance;
    rec.pass = rec.margin >= 0.0;
    rec.advisory = true;
    rec.n = n;
    rec.note = "effective sample size of the mass weights (degeneracy check)";
    rep.records.push_back(rec);
  }

  return rep;
}

// ---------------------------------------------------------------------------
// census: heavy-mass density, small-count bounds, level-sup bound, branching
// counts, grid sweeps
// ---------------------------------------------------------------------------

StatReport run_census(const ExperimentConfig& cfg) {
  const double h = cfg.h_or(1.0 / 128.0);
  require_h_multiple(h, 64, "census");
  const uint64_t n = cfg.replicates_or(20000);
  const size_t threads = resolve_threads(cfg.threads);
  const uint64_t seed = cfg.seed;

  StatReport rep;
  rep.experiment = "census";
  rep.seed = seed;
  rep.h = h;
  rep.replicates = n;
  rep.threads = threads;
  echo_common(rep, cfg);

  // -- phase 0: heavy-ball mass at a fixed level -----------------------------
  {
    constexpr double a = 1.0, r = 0.25, kappa = 1.0, c = 1.0;
    const double y = (kappa / c) * laws::gauge(r);
    const std::vector<double> radii = {0.125, 0.0625, 0.03125};
    const std::vector<double> eps = {laws::gauge(0.125), laws::gauge(0.0625)};
    const auto rows = replicate_map<CensusResult>(
        n, threads, seed,
        [&](CounterRng& rng, size_t) {
          const auto exc =
              sample_level_band_excursion(h, a, a - 0.5 * r, a, rng);
          const TreeIndex idx(exc);
          const auto view = level_view(idx, a);
          return census(view, r, y, radii, eps);
        },
        0 * kPhase);

    auto csv = open_csv(cfg.out_dir, "census_rows.csv");
    csv << "replicate,a,r,y,heavy_mass,small_count,ball_count,total_mass,"
           "sum_diameter,sum_radius\n";
    std::vector<double> heavy(n);
    for (size_t i = 0; i < n; ++i) {
      heavy[i] = rows[i].heavy_mass;
      csv << i << ',' << rows[i].a << ',' << rows[i].r << ',' << rows[i].y
          << ',' << rows[i].heavy_mass << ',' << rows[i].small_count << ','
          << rows[i].ball_count << ',' << rows[i].total_mass << ','
          << rows[i].sum_diameter << ',' << rows[i].sum_radius << '\n';
    }
    rep.config_echo["census_csv"] = "census_rows.csv";

    const auto [hm, hv] = stats::mean_var(heavy);
    (void)hv;
    const double lattice = lattice_heavy_mass_expectation(a, r, y, h);
    const double continuum = a * laws::heavy_ball_intensity(r, kappa, c);
    rep.records.push_back(mean_record(
        "census_heavy_mass_lattice", hm, lattice, 3.0 * sample_se(heavy), n,
        "mean heavy-ball mass vs the exact lattice geometric formula, y=" +
            fmt(y),
        "derived"));
    rep.records.push_back(mean_record(
        "census_heavy_mass_continuum", hm, continuum,
        3.0 * sample_se(heavy) + std::fabs(lattice - continuum), n,
        "vs a * heavy-ball intensity; tolerance adds the exact step-size bias " +
            fmt(std::fabs(lattice - continuum))));
  }

  // -- phase 1: small-count intensity bound at the census level --------------
  {
    const double a0 = 1.0 / 16.0;  // half the largest census radius
    const std::vector<double> radii = {0.125, 0.0625, 0.03125};
    const std::vector<double> eps = {laws::gauge(0.125), laws::gauge(0.0625)};
    const auto small = replicate_map<double>(
        n, threads, seed,
        [&](CounterRng& rng, size_t) {
          const auto exc = sample_conditioned_excursion(h, a0, rng, a0);
          const TreeIndex idx(exc);
          const auto view = level_view(idx, a0);
          return static_cast<double>(small_ball_census(view, radii, eps));
        },
        1 * kPhase);
    const auto [sm, sv] = stats::mean_var(small);
    (void)sv;
    const double scale = 1.0 / a0;  // excursion-measure normalization
    rep.records.push_back(bound_record(
        "census_small_bound", scale * sm,
        laws::small_ball_mu_bound(radii, eps), scale * 3.0 * sample_se(small),
        n,
        "mean small-ball count under the excursion measure vs the "
        "product-of-bands bound"));
  }

  // -- phases 2-3: fourth-moment census bound --------------------------------
  {
    constexpr double a = 2.0, r1 = 0.5, rn = 0.125;
    const std::vector<double> radii = {0.5, 0.25, 0.125};
    const std::vector<double> eps = {0.15, 0.05};
    const double a0 = 0.5 * r1;
    const auto batch0 = replicate_map<double>(
        n, threads, seed,
        [&](CounterRng& rng, size_t) {
          const auto exc = sample_conditioned_excursion(h, a0, rng, a0);
          const TreeIndex idx(exc);
          const auto view = level_view(idx, a0);
          return static_cast<double>(small_ball_census(view, radii, eps));
        },
        2 * kPhase);
    double mu = 0.0;
    for (double s : batch0) mu += s;
    mu *= (2.0 / r1) / static_cast<double>(n);

    const auto main_batch = replicate_map<std::pair<double, double>>(
        n, threads, seed,
        [&](CounterRng& rng, size_t) {
          const auto exc =
              sample_level_band_excursion(h, a, a - 0.5 * r1, a, rng);
          const TreeIndex idx(exc);
          const auto view = level_view(idx, a);
          const double s =
              static_cast<double>(small_ball_census(view, radii, eps));
          return std::make_pair(s, view.total_mass());
        },
        3 * kPhase);
    std::vector<double> fourth(n);
    for (size_t i = 0; i < n; ++i) {
      const double t = main_batch[i].first - mu * main_batch[i].second;
      fourth[i] = t * t * t * t;
    }
    const auto [fm, fv] = stats::mean_var(fourth);
    (void)fv;
    const double bound = 1e4 * a * r1 * r1 / (rn * rn * rn * rn);
    rep.records.push_back(bound_record(
        "census_fourth_moment", fm / a, bound, 3.0 * sample_se(fourth) / a, n,
        "centered fourth moment of the small-ball count, intensity mu=" +
            fmt(mu) + " from an independent batch at level " + fmt(a0)));
  }

  // -- phase 4: level-sup mass bound ------------------------------------------
  {
    const double m = 0.25;
    const double h_sup = std::max(h, 1.0 / 64.0);
    const auto limit = static_cast<size_t>(50.0 / (0.5 * h_sup * h_sup));
    const auto sup_masses = replicate_map<std::pair<double, uint8_t>>(
        n, threads, seed,
        [&](CounterRng& rng, size_t) {
          const auto s = sample_conditioned_excursion_capped(
              h_sup, m, rng, std::nullopt, limit);
          const auto prof = local_time_profile(s.excursion);
          double mx = 0.0;
          for (double v : prof.level_mass) mx = std::max(mx, v);
          return std::make_pair(mx, static_cast<uint8_t>(s.complete ? 1 : 0));
        },
        4 * kPhase);
    for (const double y : {4.0, 8.0}) {
      uint64_t hit = 0;
      for (const auto& [mx, complete] : sup_masses) {
        hit += (!complete || mx > y) ? 1 : 0;
      }
      const double p = static_cast<double>(hit) / static_cast<double>(n);
      const std::string id =
          y == 4.0 ? "census_levelsup_bound_y4" : "census_levelsup_bound_y8";
      rep.records.push_back(bound_record(
          id, p / m, laws::sup_level_mass_bound(m, y),
          3.0 * proportion_se(p, n) / m, n,
          "excursion-measure mass of {some level mass > " + fmt(y) +
              "}; capped paths count as exceedances, h=" + fmt(h_sup)));
    }
  }

  // -- phase 5: branching counts above a level --------------------------------
  {
    constexpr double b = 1.0, r_br = 0.5;
    const int32_t j_b = level_index(b, h);
    const int32_t dj = level_index(0.5 * r_br, h);
    const auto counts = replicate_map<std::pair<uint32_t, uint32_t>>(
        n, threads, seed,
        [&](CounterRng& rng, size_t) {
          const auto exc = sample_level_band_excursion(
              h, b, b - h, b + 0.5 * r_br, rng);
          const auto visits = level_visit_indices(exc, j_b);
          const auto intervals = excursion_intervals_above(exc, j_b);
          uint32_t reach = 0;
          for (const auto& iv : intervals) reach += iv.max_height >= j_b + dj;
          return std::make_pair(static_cast<uint32_t>(visits.size()), reach);
        },
        5 * kPhase);
    // Given V visits at the level, the final visit is followed by the killing
    // descent and each earlier one independently starts an upward interval
    // that reaches b + r/2 with probability (1/(2 dj)) / (1 - 1/(2 j_b)).
    const double p_succ =
        (0.5 / static_cast<double>(dj)) /
        (1.0 - 0.5 / static_cast<double>(j_b));
    std::vector<double> cs, ms;
    double sum_c = 0.0, sum_m = 0.0, sum_d2 = 0.0;
    for (const auto& [v, c] : counts) {
      const double mean_i = static_cast<double>(v - 1) * p_succ;
      sum_c += c;
      sum_m += mean_i;
      const double d = static_cast<double>(c) - mean_i;
      sum_d2 += d * d;
      if (mean_i > 0.0) {
        cs.push_back(static_cast<double>(c));
        ms.push_back(mean_i);
      }
    }
    rep.records.push_back(mean_record(
        "census_branch_mean", sum_c / sum_m, 1.0,
        3.0 * std::sqrt(sum_d2) / sum_m, n,
        "upward intervals reaching b + r/2 vs the per-visit thinning mean "
        "(equivalently (2/r) times the level mass)",
        "derived"));
    double d_stat = 0.0;
    for (size_t i = 0; i < cs.size(); ++i) {
      const double d = cs[i] - ms[i];
      d_stat += d * d / ms[i];
    }
    const double var_scale = 1.0 - p_succ;  // binomial thinning correction
    const double z =
        (d_stat - static_cast<double>(cs.size()) * var_scale) /
        (std::sqrt(2.0 * static_cast<double>(cs.size())) * var_scale);
    rep.records.push_back(z_record(
        "census_branch_dispersion", z,
        cfg.tolerance_or("census_branch_dispersion", 3.5), cs.size(),
        "dispersion of the interval counts against their per-tree means",
        "derived"));
  }

  // -- phase 6: level-grid sweeps ---------------------------------------------
  {
    const double m = 0.5;
    const auto grid_a = laws::level_grid_coarse(0.25, m);
    const auto grid_b = laws::level_grid_dyadic(2, m);
    const auto snap = [&](const laws::GridSpec& g) {
      std::vector<int32_t> levels;
      levels.reserve(g.points.size());
      for (double pt : g.points) {
        levels.push_back(static_cast<int32_t>(std::lround(pt / h)));
      }
      std::sort(levels.begin(), levels.end());
      levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
      return levels;
    };
    const auto levels_a = snap(grid_a);
    const auto levels_b = snap(grid_b);
    std::vector<int32_t> all_levels = levels_a;
    all_levels.insert(all_levels.end(), levels_b.begin(), levels_b.end());
    std::sort(all_levels.begin(), all_levels.end());
    all_levels.erase(std::unique(all_levels.begin(), all_levels.end()),
                     all_levels.end());

    const auto masses = replicate_map<std::vector<double>>(
        n, threads, seed,
        [&](CounterRng& rng, size_t) {
          const auto exc = sample_conditioned_excursion(h, m, rng, 1.0 / m);
          const auto prof = local_time_profile(exc);
          std::vector<double> out(all_levels.size());
          for (size_t i = 0; i < all_levels.size(); ++i) {
            out[i] = prof.mass_at(all_levels[i]);
          }
          return out;
        },
        6 * kPhase);

    const auto max_abs_z = [&](const std::vector<int32_t>& levels) {
      double worst = 0.0;
      for (int32_t lvl : levels) {
        const size_t pos = static_cast<size_t>(
            std::lower_bound(all_levels.begin(), all_levels.end(), lvl) -
            all_levels.begin());
        std::vector<double> vals(n);
        for (size_t i = 0; i < n; ++i) vals[i] = masses[i][pos];
        const auto [mm, mv] = stats::mean_var(vals);
        (void)mv;
        const double se = sample_se(vals);
        worst = std::max(worst, std::fabs(mm - m) / se);
      }
      return worst;
    };
    rep.records.push_back(z_record(
        "census_grid_coarse_levels", max_abs_z(levels_a),
        cfg.tolerance_or("census_grid_levels", 4.0), n,
        "max |z| of mean level mass vs m over " +
            std::to_string(levels_a.size()) + " grid levels, mesh r^(3/2)"));
    rep.records.push_back(z_record(
        "census_grid_dyadic_levels", max_abs_z(levels_b),
        cfg.tolerance_or("census_grid_levels", 4.0), n,
        "max |z| of mean level mass vs m over " +
            std::to_string(levels_b.size()) +
            " dyadic-block grid levels (snapped to the lattice)"));
  }

  return rep;
}

// ---------------------------------------------------------------------------
// hausdorff: covering-ratio scans and density-ratio profiles
// ---------------------------------------------------------------------------

namespace {
struct HausdorffSample {
  std::vector<RatioRow> rows;
  // fractions per nested radius window: [0] = widest radii only
  double below[3] = {0.0, 0.0, 0.0};
  double above[3] = {0.0, 0.0, 0.0};
};
}  // namespace

StatReport run_hausdorff(const ExperimentConfig& cfg) {
  const double h = cfg.h_or(1.0 / 4096.0);
  require_h_multiple(h, 2048, "hausdorff");
  const uint64_t n = cfg.replicates_or(1000);
  const size_t threads = resolve_threads(cfg.threads);
  const uint64_t seed = cfg.seed;
  constexpr double a = 1.0;
  constexpr double alpha = 0.4, kappa = 0.6;
  constexpr size_t kPoints = 128;  // density sample points per tree

  StatReport rep;
  rep.experiment = "hausdorff";
  rep.seed = seed;
  rep.h = h;
  rep.replicates = n;
  rep.threads = threads;
  echo_common(rep, cfg);
  rep.config_echo["a"] = fmt(a);
  rep.config_echo["alpha"] = fmt(alpha);
  rep.config_echo["kappa"] = fmt(kappa);

  std::vector<double> scan_radii, chain_radii;
  for (int j = 4; j <= 9; ++j) scan_radii.push_back(std::ldexp(1.0, -j));
  for (int j = 4; j <= 10; ++j) chain_radii.push_back(std::ldexp(1.0, -j));
  // window w keeps chain radii with exponent <= 6 + 2w
  const size_t window_upto[3] = {2, 4, 6};  // index into chain_radii

  const auto samples = replicate_map<HausdorffSample>(
      n, threads, seed,
      [&](CounterRng& rng, size_t) {
        const auto exc = sample_level_band_excursion(
            h, a, a - 0.5 * scan_radii.front(), a, rng);
        const TreeIndex idx(exc);
        const auto view = level_view(idx, a);
        HausdorffSample s;
        s.rows = hausdorff_ratio_scan(view, scan_radii);
        const auto chain = enlarged_ball_chain(view, chain_radii);
        uint64_t n_below[3] = {0, 0, 0}, n_above[3] = {0, 0, 0};
        for (size_t p = 0; p < kPoints; ++p) {
          const size_t rank =
              static_cast<size_t>(rng.next_below(view.visits.size()));
          const size_t leaf = ball_index_of_rank(chain.decomps.back(), rank);
          double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
          for (size_t w = 0; w < 3; ++w) {
            for (size_t k = (w == 0 ? 0 : window_upto[w - 1] + 1);
                 k <= window_upto[w]; ++k) {
              const auto& ball =
                  chain.decomps[k].balls[chain.ancestor[k][leaf]];
              const double ratio = ball.mass / laws::gauge(chain_radii[k]);
              lo = std::min(lo, ratio);
              hi = std::max(hi, ratio);
            }
            n_below[w] += hi < alpha;
            n_above[w] += lo > kappa;
          }
        }
        for (size_t w = 0; w < 3; ++w) {
          s.below[w] = static_cast<double>(n_below[w]) / kPoints;
          s.above[w] = static_cast<double>(n_above[w]) / kPoints;
        }
        return s;
      },
      0 * kPhase);

  // CSV artifact: one row per replicate and radius.
  {
    auto csv = open_csv(cfg.out_dir, "hausdorff_ratios.csv");
    csv << "replicate,r,ball_count,max_diameter,mass,sum_diameter,sum_radius,"
           "ratio_diameter,ratio_radius\n";
    for (size_t i = 0; i < n; ++i) {
      for (const auto& row : samples[i].rows) {
        csv << i << ',' << row.r << ',' << row.ball_count << ','
            << row.max_diameter << ',' << row.mass << ',' << row.sum_diameter
            << ',' << row.sum_radius << ',' << row.ratio_diameter << ','
            << row.ratio_radius << '\n';
      }
    }
    rep.config_echo["hausdorff_csv"] = "hausdorff_ratios.csv";
  }

  std::vector<double> med_dia(scan_radii.size()), med_rad(scan_radii.size());
  for (size_t k = 0; k < scan_radii.size(); ++k) {
    std::vector<double> dia(n), rad(n);
    for (size_t i = 0; i < n; ++i) {
      dia[i] = samples[i].rows[k].ratio_diameter;
      rad[i] = samples[i].rows[k].ratio_radius;
    }
    med_dia[k] = stats::median(dia);
    med_rad[k] = stats::median(rad);
  }
  const auto trend_note = [&](const std::vector<double>& med) {
    std::string s = "medians for r=2^-4..2^-9:";
    for (double v : med) s += " " + fmt(v);
    return s;
  };
  const auto decreasing = [](const std::vector<double>& med) {
    for (size_t k = 0; k + 1 < med.size(); ++k) {
      if (!(med[k + 1] < med[k])) return false;
    }
    return true;
  };
  rep.records.push_back(trend_record(
      "hausdorff_trend_diameter", decreasing(med_dia),
      med_dia.back() / med_dia.front(),
      "median covering ratio (diameter gauge) vs radius; " +
          trend_note(med_dia)));
  rep.records.push_back(trend_record(
      "hausdorff_trend_radius", decreasing(med_rad),
      med_rad.back() / med_rad.front(),
      "median covering ratio (radius gauge) vs radius; " +
          trend_note(med_rad)));
  rep.records.push_back(window_record(
      "hausdorff_ratio_window", med_dia.back(), 1.3, 3.0, n,
      "median diameter-gauge covering ratio at r=2^-9 against the "
      "order-one window"));

  double below[3] = {0, 0, 0}, above[3] = {0, 0, 0};
  for (const auto& s : samples) {
    for (size_t w = 0; w < 3; ++w) {
      below[w] += s.below[w];
      above[w] += s.above[w];
    }
  }
  for (size_t w = 0; w < 3; ++w) {
    below[w] /= static_cast<double>(n);
    above[w] /= static_cast<double>(n);
  }
  const auto frac_note = [&](const double* f) {
    std::ostringstream os;
    os.precision(4);
    os << "fractions for r_min=2^-6, 2^-8, 2^-10: " << f[0] << " " << f[1]
       << " " << f[2];
    return os.str();
  };
  rep.records.push_back(trend_record(
      "hausdorff_density_below_trend",
      below[1] <= below[0] && below[2] <= below[1], below[2],
      "points with all mass/gauge ratios below " + fmt(alpha) +
          " as the window tightens (nested, so non-increasing); " +
          frac_note(below)));
  rep.records.push_back(trend_record(
      "hausdorff_density_above_trend",
      above[1] <= above[0] && above[2] <= above[1], above[2],
      "points with all mass/gauge ratios above " + fmt(kappa) +
          " as the window tightens (nested, so non-increasing); " +
          frac_note(above)));

  return rep;
}

StatReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.experiment == "laws") return run_laws(cfg);
  if (cfg.experiment == "rayknight") return run_rayknight(cfg);
  if (cfg.experiment == "bismut") return run_bismut(cfg);
  if (cfg.experiment == "census") return run_census(cfg);
  if (cfg.experiment == "hausdorff") return run_hausdorff(cfg);
  throw ConfigError("unknown experiment '" + cfg.experiment +
                    "' (expected laws|rayknight|bismut|census|hausdorff)");
}

}  // namespace crtlab
