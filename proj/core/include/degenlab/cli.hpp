#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace degenlab::cli {

/// One finding from config validation.
struct Diagnostic {
  std::string field;
  std::string message;
  bool warning = false;  ///< false = error
};

struct RunOutput {
  std::string csv_path;
  std::string summary_path;
  int rows = 0;
};

/// Caller-side overrides of config fields (CLI flags win over the file).
struct Overrides {
  std::string out_dir;
  std::string format;  ///< "csv" or "json"
  std::uint64_t seed = 0;
  bool has_seed = false;
  int threads = 0;  ///< 0 = config / env / hardware default
};

/// Schema-check a config file; returns diagnostics (empty = valid).
std::vector<Diagnostic> validate_file(const std::string& config_path);

/// Run the experiment described by the config file; writes results.csv and
/// summary.json under the output directory. Throws degenlab::Error
/// (ConfigError for malformed configs) on failure.
RunOutput run_config_file(const std::string& config_path,
                          const Overrides& overrides = {});

/// Entry point of the command-line driver. Exit codes: 0 success,
/// 2 configuration errors, 3 module errors.
int cli_main(int argc, char** argv);

}  // namespace degenlab::cli
