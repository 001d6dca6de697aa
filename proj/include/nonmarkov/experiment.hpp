#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "nonmarkov/dephasing.hpp"
#include "nonmarkov/oracle.hpp"

namespace nonmarkov {

enum class ExperimentMode { PhaseFactors, Cmi, Measures, Check };

struct DiscreteConfig {
  int n_modes = 2;
  std::optional<int> n_max;  // smallest admissible truncation when unset
};

struct GridConfig {
  double t_start = 0.0;
  double t_end = 5.0;
  double dt = 0.01;
};

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::PhaseFactors;
  DephasingParams dephasing;
  std::vector<EnvKind> env_kinds{EnvKind::Entangled};
  std::optional<DiscreteConfig> discrete;
  GridConfig grid;
  std::vector<std::string> candidates{"ops_state"};
  std::filesystem::path output_path;
  std::uint64_t seed = 1;
  int samples = 100;
};

/// Raised for malformed or inconsistent configuration files.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Relative output paths resolve against `base_dir`.
ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// A candidate initial state on [A, S1, S2] (in some order). TSIO candidates
/// also carry their state pair for the distance measures.
struct Candidate {
  std::string spec;
  DensityMatrix state;
  std::optional<std::pair<DensityMatrix, DensityMatrix>> pair;
};

/// "ops_state", "tsio:<a>,<b>" with a, b two-qubit names (two characters from
/// 0 1 + -, or psi+ psi- phi+ phi-), "random:<seed>".
Candidate make_candidate(const std::string& spec);

/// Shortest round-trip decimal form, independent of the locale.
std::string format_double(double value);

/// Writes through a temporary file in the same directory and renames it.
void write_atomically(const std::filesystem::path& path, const std::string& content);

std::string phase_factor_csv(const ExperimentConfig& config);
std::string cmi_csv(const ExperimentConfig& config);
std::string measures_csv(const ExperimentConfig& config);
std::string check_json(std::uint64_t seed, int samples);

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumerical = 2, kExitCheckFailed = 3 };

/// Executes a parsed config, writing its output file. Returns an exit code;
/// diagnostics go to `err`.
int run_experiment(const ExperimentConfig& config, std::ostream& err);
int run_config_file(const std::filesystem::path& path, std::ostream& err);

/// Runs the verification suites; writes JSON to `output` or to `out`.
int run_check(std::uint64_t seed, int samples, const std::optional<std::filesystem::path>& output,
              std::ostream& out, std::ostream& err);

}  // namespace nonmarkov
