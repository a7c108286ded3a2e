#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "vicar/harness.hpp"

namespace vicar {

class UnknownPreset : public std::invalid_argument {
 public:
  explicit UnknownPreset(const std::string& name)
      : std::invalid_argument("unknown preset '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

std::vector<std::string> preset_names();

// Grid cells of a named experiment; throws UnknownPreset.
std::vector<CellConfig> preset_cells(const std::string& name);

ExperimentSpec make_preset(const std::string& name, std::size_t n_runs,
                           std::uint64_t master_seed);

// Baseline dyad: m=50, pi_max=1, alpha=0.8, eps=0.1, greedy, phi=0.5, T=1000.
CellConfig baseline_cell(const std::string& preset, Mode mode);

}  // namespace vicar
