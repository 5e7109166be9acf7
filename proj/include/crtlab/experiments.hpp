#pragma once
// The five statistical experiments of the laboratory, each returning a
// StatReport of named test records:
//   laws      - closed-form marginal laws (level mass, ball counts/masses,
//               height tails, duration density, ring-mass sampler, branching
//               transition kernel)
//   rayknight - level-mass flow across levels: binned kernel comparison,
//               cross-ball independence, martingale mean, hitting bounds
//   bismut    - mass-weighted point-of-view ring masses against the
//               closed-form ring law (importance-weighted tests)
//   census    - heavy-ball mass density, small-ball count bounds, level-sup
//               bound, branching counts along level grids
//   hausdorff - gauge covering-ratio scans and density-ratio profiles
// Replicate RNG streams depend only on (seed, phase, replicate index), so
// reports are byte-identical across thread counts.

#include "crtlab/config.hpp"
#include "crtlab/report.hpp"

namespace crtlab {

StatReport run_laws(const ExperimentConfig& cfg);
StatReport run_rayknight(const ExperimentConfig& cfg);
StatReport run_bismut(const ExperimentConfig& cfg);
StatReport run_census(const ExperimentConfig& cfg);
StatReport run_hausdorff(const ExperimentConfig& cfg);

// Dispatch on cfg.experiment; throws ConfigError for unknown names.
StatReport run_experiment(const ExperimentConfig& cfg);

}  // namespace crtlab
