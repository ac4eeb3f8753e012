#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "steinlab/families.hpp"

namespace steinlab {

// Parsed experiment description. JSON schema (version 1):
//   { "schema_version": 1, "name": "...", "seed": 7, "eps": 0.2, "n_max": 8,
//     "log_base": "2"|"e" (optional),
//     "null_family": {...}, "alt_family": {...},
//     "checks": ["stein-rates", ...], "params": {"samples": 200, ...} }
struct Scenario {
  int schema_version = 1;
  std::string name;
  std::uint64_t seed = 1;
  double eps = 0.1;
  int n_max = 4;
  FamilySpec null_family;
  FamilySpec alt_family;
  std::vector<std::string> checks;
  std::map<std::string, double> params;
  bool has_log_base = false;
  LogBase log_base = LogBase::two;
};

// Throw DomainError on malformed or unknown content; never touches the disk
// beyond reading the file.
Scenario parse_scenario_file(const std::string& path);
Scenario parse_scenario_json(const std::string& text);

struct CheckInfo {
  std::string id;
  std::string description;
};
// Stable registry of runnable checks; ids are the config vocabulary.
const std::vector<CheckInfo>& check_registry();

struct CheckOutcome {
  std::string check;
  bool pass = true;
  bool hard = true;      // diagnostics set hard = false and never gate exit codes
  bool capacity = false; // aborted by a capacity limit (partial result)
  double margin = 0.0;   // smallest slack observed, configured units
  double runtime_seconds = 0.0;
  std::string note;
};

// Numeric result table; one CSV per table.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Report {
  std::string scenario_name;
  std::uint64_t seed = 1;
  std::vector<CheckOutcome> outcomes;
  std::vector<Table> tables;

  bool all_hard_pass() const;
  bool any_capacity() const;
};

// Runs the scenario's checks (up to `jobs` in parallel). Checks are seeded
// individually from (seed, check id), so results are identical at any
// parallelism level.
Report run_scenario(const Scenario& sc, int jobs);

// Full CLI path: parse, run, write one CSV per table plus
// <name>-summary.json under out_dir (files written atomically; runtimes are
// kept in a separate JSON key so the rest of the report is byte-stable).
// Returns the process exit code: 0 all hard checks pass, 1 hard failure,
// 2 config error (nothing written), 3 capacity truncation.
int run_scenario_files(const std::string& config_path, const std::string& out_dir,
                       int jobs, bool has_seed_override, std::uint64_t seed_override);

}  // namespace steinlab
