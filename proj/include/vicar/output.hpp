#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vicar/harness.hpp"

namespace vicar {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "1.0.0";

// Column order of metrics.csv.
inline constexpr const char* kCsvColumns[] = {
    "preset", "mode",     "topology",     "m",            "pi_max",
    "alpha",  "epsilon",  "tau",          "phi1",         "phi2",
    "phi_ol", "phi_bs",   "sharing_mask", "sharing_freq", "T",
    "period", "metric_name", "value",     "std_err",      "n_runs"};

struct OutputRow {
  std::string preset;    // "<preset>" or "<preset>:<variant>"
  std::string mode;
  std::string topology;
  std::size_t m = 0;
  double pi_max = 0.0;
  double alpha = 0.0;
  double epsilon = 0.0;
  std::string tau;       // "greedy" or a number
  double phi1 = 0.0;
  double phi2 = 0.0;
  std::string phi_ol;    // "phi" when tied to each agent's own rate
  double phi_bs = 0.0;
  std::string sharing_mask;
  std::size_t sharing_freq = 1;
  std::size_t horizon = 0;
  std::size_t period = 0;  // 1-based
  std::string metric_name;
  double value = 0.0;
  double std_err = 0.0;
  std::size_t n_runs = 0;

  friend bool operator==(const OutputRow&, const OutputRow&) = default;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest decimal text that parses back to exactly `x`.
std::string format_number(double x);

std::string preset_label(const CellConfig& cell);
std::string mask_label(const SharingPolicy& sharing);

// Rows of every successful cell, sorted by (cell columns, period, metric).
// Throws std::invalid_argument if two cells map to the same columns.
std::vector<OutputRow> make_rows(const std::vector<CellResult>& results);

void write_csv(std::ostream& out, const std::vector<OutputRow>& rows);
// Inverse of write_csv; throws std::runtime_error on malformed input.
std::vector<OutputRow> read_csv(std::istream& in);

nlohmann::json rows_to_json(const std::vector<OutputRow>& rows);

nlohmann::json cell_to_json(const CellConfig& cell);
CellConfig cell_from_json(const nlohmann::json& j);

nlohmann::json make_manifest(const ExperimentSpec& spec, int workers,
                             double wall_seconds,
                             const std::vector<CellResult>& results);
ExperimentSpec spec_from_manifest(const nlohmann::json& manifest);

// Writes metrics.csv (and metrics.json if `with_json`) plus manifest.json
// into `dir`, creating it if needed. Throws IoError.
void write_outputs(const std::filesystem::path& dir,
                   const std::vector<CellResult>& results,
                   const ExperimentSpec& spec, bool with_json, int workers,
                   double wall_seconds);

}  // namespace vicar
