#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace besov {

inline constexpr int kSchemaVersion = 1;

// Malformed or inconsistent scenario configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
};

struct ScenarioResult {
  std::string name;
  std::string operation;
  nlohmann::json report;  // schema_version, scenario, operation, config (resolved), result, reports, verdict
  std::optional<std::string> csv;
  bool passed = true;     // every verification report passed

  int exit_code() const { return passed ? 0 : 2; }
};

// Registered operation names, in the form used by the "operation" field.
const std::vector<std::string>& operation_names();

// Runs one parsed scenario. Relative file references resolve against base_dir.
// Throws ConfigError (and the library's argument errors) on invalid input.
ScenarioResult execute_scenario(nlohmann::json config, const RunOverrides& overrides,
                                const std::filesystem::path& base_dir = {});

enum class OutputFormat { json, csv };

// Loads, runs and writes <out>/<name>.json (plus <name>.csv for tabular results).
// Nothing is written unless the run completes. Exit status: 0 all pass, 2 some fail, 1 error.
// `operation` (when set) must match the config's operation field.
int run_scenario(const std::filesystem::path& config_path, const RunOverrides& overrides,
                 const std::filesystem::path& out_dir, OutputFormat format, std::ostream& out, std::ostream& err,
                 const std::optional<std::string>& operation = std::nullopt);

// Runs every *.json scenario of a directory (sorted by file name) with up to `jobs`
// scenarios in flight, then writes <out>/suite.json with the pass/fail matrix.
// Exit status: 1 if the directory is empty or any scenario errored, else 2 if any failed, else 0.
int run_suite(const std::filesystem::path& dir, const RunOverrides& overrides, const std::filesystem::path& out_dir,
              int jobs, std::ostream& out, std::ostream& err);

}  // namespace besov
