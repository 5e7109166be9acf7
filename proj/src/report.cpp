#include "crtlab/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace crtlab {

namespace {

constexpr const char* kSchema = "crtlab-report-v1";

void set_if_finite(nlohmann::ordered_json& obj, const char* key, double x) {
  if (std::isfinite(x)) obj[key] = x;
}

nlohmann::ordered_json record_to_json(const TestRecord& rec) {
  nlohmann::ordered_json j;
  j["id"] = rec.id;
  j["kind"] = rec.kind;
  j["oracle"] = rec.oracle;
  j["pass"] = rec.pass;
  j["advisory"] = rec.advisory;
  set_if_finite(j, "estimate", rec.estimate);
  set_if_finite(j, "expected", rec.expected);
  set_if_finite(j, "stat", rec.stat);
  set_if_finite(j, "tolerance", rec.tolerance);
  set_if_finite(j, "margin", rec.margin);
  j["n"] = rec.n;
  if (!rec.note.empty()) j["note"] = rec.note;
  return j;
}

}  // namespace

bool StatReport::all_pass() const {
  for (const auto& rec : records) {
    if (!rec.pass) return false;
  }
  return true;
}

bool StatReport::required_pass() const {
  for (const auto& rec : records) {
    if (!rec.advisory && !rec.pass) return false;
  }
  return true;
}

size_t StatReport::count_passed() const {
  size_t k = 0;
  for (const auto& rec : records) k += rec.pass ? 1 : 0;
  return k;
}

std::string StatReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema"] = kSchema;
  j["experiment"] = experiment;
  j["seed"] = seed;
  j["h"] = h;
  j["replicates"] = replicates;
  j["threads"] = threads;
  if (!config_echo.empty()) j["config"] = config_echo;
  j["summary"] = {
      {"records", records.size()},
      {"passed", count_passed()},
      {"required_pass", required_pass()},
  };
  auto arr = nlohmann::ordered_json::array();
  for (const auto& rec : records) arr.push_back(record_to_json(rec));
  j["records"] = std::move(arr);
  return j.dump(2) + "\n";
}

void print_report_table(const StatReport& report, std::ostream& os) {
  os << "experiment " << report.experiment << "  h=" << report.h
     << "  seed=" << report.seed << "  replicates=" << report.replicates
     << "\n";
  os << std::left << std::setw(34) << "record" << std::setw(8) << "kind"
     << std::setw(13) << "stat" << std::setw(13) << "tolerance"
     << std::setw(8) << "status" << "note\n";
  for (const auto& rec : report.records) {
    std::ostringstream stat, tol;
    if (std::isfinite(rec.stat)) stat << std::setprecision(5) << rec.stat;
    if (std::isfinite(rec.tolerance)) {
      tol << std::setprecision(5) << rec.tolerance;
    }
    os << std::left << std::setw(34) << rec.id << std::setw(8) << rec.kind
       << std::setw(13) << stat.str() << std::setw(13) << tol.str()
       << std::setw(8)
       << (rec.pass ? "pass" : (rec.advisory ? "FLAG" : "FAIL"))
       << rec.note << "\n";
  }
  os << report.count_passed() << "/" << report.records.size()
     << " records passed; required verdict: "
     << (report.required_pass() ? "pass" : "FAIL") << "\n";
}

std::string write_report_json(const StatReport& report,
                              const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::string path =
      (std::filesystem::path(out_dir) / (report.experiment + "_report.json"))
          .string();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << report.to_json();
  return path;
}

std::string merge_reports(const std::vector<std::string>& paths,
                          const std::string& out_dir) {
  nlohmann::ordered_json combined;
  combined["schema"] = kSchema;
  auto arr = nlohmann::ordered_json::array();
  bool ok = true;
  size_t records = 0, passed = 0;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read report: " + path);
    nlohmann::ordered_json j;
    in >> j;
    ok = ok && j.at("summary").at("required_pass").get<bool>();
    records += j.at("summary").at("records").get<size_t>();
    passed += j.at("summary").at("passed").get<size_t>();
    arr.push_back(std::move(j));
  }
  combined["summary"] = {
      {"reports", paths.size()},
      {"records", records},
      {"passed", passed},
      {"required_pass", ok},
  };
  combined["reports"] = std::move(arr);

  std::filesystem::create_directories(out_dir);
  const std::string path =
      (std::filesystem::path(out_dir) / "combined_report.json").string();
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << combined.dump(2) << "\n";
  return path;
}

}  // namespace crtlab
