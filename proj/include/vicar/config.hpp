#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "vicar/harness.hpp"

namespace vicar {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitUnknownPreset = 2,
  kExitBadConfig = 3,
  kExitConflict = 4,
  kExitIo = 5,
  kExitCellFailed = 6,
};

// Carries the process exit code and, where one applies, the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(ExitCode code, std::string key, const std::string& message)
      : std::runtime_error(message), code_(code), key_(std::move(key)) {}
  ExitCode code() const { return code_; }
  const std::string& key() const { return key_; }

 private:
  ExitCode code_;
  std::string key_;
};

// Contents of a --config file. Each line is `key = value[, value...]`;
// keys with several values span a Cartesian grid, the last key varying
// fastest. `#` starts a comment.
struct GridConfig {
  std::string name = "custom";
  std::vector<CellConfig> cells;
  std::optional<std::size_t> runs;
  std::optional<std::uint64_t> seed;
  bool crn = false;
};

// Throws ConfigError(kExitBadConfig) naming the key at fault.
GridConfig parse_config(std::istream& in);
GridConfig parse_config_file(const std::filesystem::path& path);

struct CliOptions {
  ExperimentSpec spec;
  std::filesystem::path out_dir = "results";
  bool json = false;
  int workers = 1;
};

inline constexpr std::size_t kFullScaleRuns = 100'000;

// Returns nullopt when only help or the preset list was requested (already
// printed to `out`). Throws ConfigError on any invalid input.
std::optional<CliOptions> parse_args(int argc, const char* const* argv,
                                     std::ostream& out);

}  // namespace vicar
