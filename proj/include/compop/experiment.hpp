#pragma once

// Batch experiments: a JSON config names a symbol, a parameter block and a seed;
// run_experiment writes CSV data and a JSON verdict file into <out>/<experiment>.
//
//   {
//     "schema_version": 1,
//     "experiment": "my-run",
//     "symbol": {...},             // see serialize.hpp
//     "params": {...},             // per subcommand, see README
//     "seed": 20240601,            // required for Monte Carlo runs
//     "output": "out"
//   }

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "compop/serialize.hpp"

namespace compop {

inline constexpr int kSchemaVersion = 1;

struct ExperimentConfig {
  int schema_version = kSchemaVersion;
  std::string experiment = "experiment";
  std::optional<json> symbol;
  json params = json::object();
  std::optional<std::uint64_t> seed;
  std::string output = "out";
};

/// Parse with line/column diagnostics for syntax errors and field paths for
/// schema errors (ErrorCode::ConfigError).
ExperimentConfig parse_config(const std::string& text, const std::string& source = "config");
ExperimentConfig load_config(const std::filesystem::path& path);
json to_json(const ExperimentConfig& c);

const std::vector<std::string>& subcommands();
const std::vector<std::string>& preset_names();

struct Preset {
  std::string command;
  ExperimentConfig config;
};

Preset preset(const std::string& name);

struct RunResult {
  int exit_code = 0;  // 0 ok, 2 some verdict inconclusive (errors throw)
  std::string summary;
  std::vector<std::filesystem::path> files;
};

/// Runs one subcommand. Files go to <out_dir>/<experiment>/ through atomic writes.
RunResult run_experiment(const std::string& command, const ExperimentConfig& config,
                         const std::filesystem::path& out_dir);

}  // namespace compop
