#pragma once
// Experiment configuration: defaults, INI-style config files, and the
// override order file < command line used by the CLI.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace crtlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string experiment;
  std::optional<double> h;           // unset selects the experiment default
  uint64_t seed = 1;
  std::optional<uint64_t> replicates;  // unset selects the experiment default
  size_t threads = 0;                  // 0 selects hardware concurrency
  std::string out_dir = "out";
  bool json_stdout = false;  // emit the JSON report on stdout too

  double h_or(double fallback) const { return h ? *h : fallback; }
  uint64_t replicates_or(uint64_t fallback) const {
    return replicates ? *replicates : fallback;
  }

  // [tolerance] section: per-record overrides keyed by record id.
  std::map<std::string, double> tolerance;
  // [settings] section: free-form experiment-specific knobs.
  std::map<std::string, std::string> settings;

  double tolerance_or(const std::string& id, double fallback) const;
  std::string setting_or(const std::string& key,
                         const std::string& fallback) const;
  double setting_or(const std::string& key, double fallback) const;

  // Throws ConfigError when values are out of range (h outside (0,1],
  // misaligned grids, zero replicates after defaulting).
  void validate() const;
};

// Parse an INI-style file: '#'/';' comments, [run]/[tolerance]/[settings]
// sections, key = value lines. Unknown keys in [run] are errors; unknown
// sections are errors.
ExperimentConfig parse_config_file(const std::string& path);

// Apply one [run]-section assignment (shared by file parsing and CLI flags).
void apply_run_key(ExperimentConfig& cfg, const std::string& key,
                   const std::string& value);

}  // namespace crtlab
