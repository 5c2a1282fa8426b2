// Experiment runner: parse a JSON config describing a system, an
// energy, covers and tasks; validate it; execute the tasks and emit
// CSV/JSON tables, an audit summary and a reproducibility manifest.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pressurelab/energy.hpp"
#include "pressurelab/factor.hpp"
#include "pressurelab/pressure.hpp"
#include "pressurelab/variational.hpp"

namespace plab {

struct CoverSpec {
  std::string name;
  Cover cover;
};

struct FactorTaskSpec {
  SlidingBlockCode code;
  int n_lo = 1;
  int n_hi = 3;
  int surjectivity_check_length = 6;
};

struct VariationalTaskSpec {
  int memory = 1;
  OptimizeOptions opts;
  bool attach_pressure = true;  // fill the pressure window from n_range
};

struct ExperimentConfig {
  Subshift system;
  EnergyFunctional energy;
  std::vector<CoverSpec> covers;
  int n_lo = 1;
  int n_hi = 4;
  std::vector<int> m_list;
  std::vector<std::string> tasks;
  std::uint64_t seed = 1;
  Precision precision = Precision::Float;
  int resolution_cap = 0;  // 0: derive from the alphabet
  int workers = 1;
  int entropy_n_max = 6;
  std::optional<FactorTaskSpec> factor;
  VariationalTaskSpec variational;
  std::string source_text;  // raw document, hashed into the manifest
};

struct Diagnostic {
  std::string path;  // config location, e.g. "covers[0]"
  std::string message;
};

// Structural parse failure: malformed JSON, missing required fields, or
// domain objects that cannot be constructed at all.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, std::string message);
  std::string path;
  std::string message;
};

/// Parse the config document.  Throws ConfigError on structural
/// problems; semantic problems are left to validate().
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// Semantic diagnostics; empty means the config is runnable.  Never
/// executes tasks.
std::vector<Diagnostic> validate(const ExperimentConfig& cfg);

/// Convenience: parse + validate, folding parse failures into the
/// diagnostic list instead of throwing.
std::vector<Diagnostic> validate_text(const std::string& text);

// A task hit the resolution cap; carries the offending task's name.
class TaskCapError : public std::runtime_error {
 public:
  TaskCapError(std::string task, const ResolutionCapError& cause);
  std::string task;
  int required;
  int cap;
};

struct TaskTiming {
  std::string task;
  double seconds = 0;
};

struct RunManifest {
  std::string config_hash;  // FNV-1a 64 of the config text, hex
  std::string tool_version;
  std::string table_version;
  std::uint64_t seed = 0;
  std::string precision;
  std::vector<TaskTiming> timings;
  int audits_passed = 0;
  int audits_failed = 0;
  std::vector<std::string> outputs;  // files written, in order
};

/// Execute the configured tasks, writing pressure.csv, entropy.csv,
/// variational.json, audits.json and manifest.json under output_dir.
/// Precondition: validate(cfg) is empty.  Throws TaskCapError when a
/// task exceeds the resolution cap.
RunManifest run(const ExperimentConfig& cfg, const std::string& output_dir);

std::uint64_t fnv1a64(const std::string& text);
std::string diagnostics_to_json(const std::vector<Diagnostic>& diags);

}  // namespace plab
