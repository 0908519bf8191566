#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tcurv/io.hpp"

namespace tcurv {

// One experiment invocation.  Negative numeric fields mean "use the
// experiment's default"; every experiment documents its defaults in its
// --list summary.  The seed fully determines all randomness: instance k of a
// suite draws from a generator seeded with stream_seed(seed, k), so results
// are independent of the worker schedule.
struct ExperimentConfig {
  std::string name = "all";
  int instances = -1;
  int subdiv = -1;          // icosphere refinement level
  int rows = -1, cols = -1; // grid patch resolution
  int samples = -1;         // curve sample count
  int t_steps = -1;         // parallel-flow grid size
  int directions = -1;      // normal-map sampling directions
  double t_max = -1.0;      // parallel-flow normal distance
  double tol_rel = -1.0;    // chord-fit relative tolerance
  uint64_t seed = 2026;
  std::string out = "out";
  int jobs = 0;             // worker cap, 0 = hardware concurrency
};

// Flat INI-style config text:
//
//   # comment
//   [global]
//   seed = 7
//   [chord-fit]
//   samples = 400
//
// Section names must be experiment names or "global"; keys must be
// ExperimentConfig fields (spelled as above); numeric values must be
// positive except jobs, which may be 0.  Violations throw ConfigError.
std::map<std::string, std::map<std::string, std::string>> parse_config_text(const std::string& text);

// Config for `name`: defaults, then [global], then [name].
ExperimentConfig config_from_sections(
    const std::map<std::string, std::map<std::string, std::string>>& sections,
    const std::string& name);

// In-memory artifacts of a single experiment (no file output).
struct ExperimentOutput {
  CsvTable results;   // one row per instance
  CsvTable defects;   // worst-defect summary, one row per tracked quantity
  std::vector<std::pair<std::string, std::vector<std::array<double, 2>>>> plots;
  std::vector<std::pair<std::string, std::string>> files;  // extra artifacts (relative path, bytes)
  bool pass = true;
};
ExperimentOutput run_single(const ExperimentConfig& cfg);

// Runs cfg.name (or every experiment for "all"), writing
// <out>/<name>/results.csv, defects.csv, and plotdata/*.dat.  Returns 0 iff
// every asserted row passed.
int run_experiment(const ExperimentConfig& cfg);

// Experiment names in execution order of "all".
const std::vector<std::string>& experiment_names();

// One-line description of what the experiment verifies, for --list.
std::string experiment_summary(const std::string& name);

}  // namespace tcurv
