#ifndef GAMMAFLOW_HARNESS_HPP
#define GAMMAFLOW_HARNESS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gammaflow/serialize.hpp"

namespace gammaflow {

/// Configuration errors map to exit code 1 (as opposed to InvariantError,
/// exit code 2).
struct UsageError : std::invalid_argument {
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

struct ExperimentConfig {
  std::string experiment;  // energy | jacobian | decompose | flatnorm | deform |
                           // recover | minimize | sweep | selftest | fixtures
  std::uint64_t seed = 0;
  int threads = 1;  // recorded; modules are deterministic regardless
  std::string out_dir;
  json params = json::object();
};

/// Parses and validates a config document; unknown keys are rejected with the
/// offending key named.
ExperimentConfig parse_config(const json& doc);

/// Runs the experiment, writing outputs and a manifest (config echo, version,
/// wall time, per-output checksums) into cfg.out_dir.
void run_experiment(const ExperimentConfig& cfg);

/// Bundled fixture inputs and golden CSVs, keyed by filename.
const std::map<std::string, std::string>& fixtures();
void write_fixtures(const std::string& dir);

/// Runs the trivial example table of every module; returns (name, passed)
/// pairs. Used by the selftest experiment and the regression golden.
std::vector<std::pair<std::string, bool>> run_selftest_table();

}  // namespace gammaflow

#endif
