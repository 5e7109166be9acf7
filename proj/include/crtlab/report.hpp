#pragma once
// Experiment output: a flat list of named test records with pass/fail
// margins, printable as a table and serializable to a stable JSON schema.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace crtlab {

struct TestRecord {
  std::string id;      // stable machine-readable name, unique per report
  std::string kind;    // ks | chi2 | z | mean | bound | count | trend | window
  std::string oracle;  // closed_form | derived | trend
  double estimate = std::numeric_limits<double>::quiet_NaN();
  double expected = std::numeric_limits<double>::quiet_NaN();
  double stat = std::numeric_limits<double>::quiet_NaN();
  double tolerance = std::numeric_limits<double>::quiet_NaN();
  double margin = std::numeric_limits<double>::quiet_NaN();
  bool pass = false;
  bool advisory = false;  // diagnostic rows that do not gate the exit status
  uint64_t n = 0;         // sample size behind the record
  std::string note;
};

struct StatReport {
  std::string experiment;
  uint64_t seed = 0;
  double h = 0.0;
  uint64_t replicates = 0;
  size_t threads = 0;
  std::map<std::string, std::string> config_echo;
  std::vector<TestRecord> records;

  bool all_pass() const;
  bool required_pass() const;  // ignores advisory records
  size_t count_passed() const;

  // Stable JSON: sorted keys, non-finite numeric fields omitted.
  std::string to_json() const;
};

// Aligned human-readable table, one row per record.
void print_report_table(const StatReport& report, std::ostream& os);

// Writes <out_dir>/<experiment>_report.json (creating out_dir) and returns
// the path.
std::string write_report_json(const StatReport& report,
                              const std::string& out_dir);

// Merge previously written reports into <out_dir>/combined_report.json with
// an overall verdict; returns the path.
std::string merge_reports(const std::vector<std::string>& paths,
                          const std::string& out_dir);

}  // namespace crtlab
