#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vicar/metrics.hpp"
#include "vicar/system.hpp"

namespace vicar {

// One point of an experiment grid. Agents with even index use (phi1, rule1),
// odd ones (phi2, rule2).
struct CellConfig {
  std::string preset;
  std::string variant;  // distinguishes cells whose CSV columns coincide
  Mode mode = Mode::kNone;
  Topology topology = Topology::dyad();
  std::size_t m = 50;
  double pi_max = 1.0;
  double alpha = 0.8;
  double epsilon = 0.1;
  Temperature tau = Temperature::greedy();
  double phi1 = 0.5;
  double phi2 = 0.5;
  std::optional<double> phi_ol;  // unset: each agent's own learning rate
  double phi_bs = 0.5;
  SharingPolicy sharing;
  std::size_t horizon = 1000;
  bool full_feedback = false;
  UpdateRule rule1 = UpdateRule::kEwa;
  UpdateRule rule2 = UpdateRule::kEwa;
  double tau_low = 0.01;
  double tau_high = 0.1;
  double threshold = 1.5;
  bool observed_first = false;
  bool scope_metrics = false;  // emit search-scope rows

  SystemConfig system_config() const;
  // Cells sharing this key draw identical environments and priors under
  // common random numbers.
  std::string environment_key() const;
  void validate() const;
};

struct ExperimentSpec {
  std::string name;
  std::vector<CellConfig> cells;
  std::size_t n_runs = 10'000;
  std::uint64_t master_seed = 42;
  bool common_random_numbers = false;

  void validate() const;
};

struct CellResult {
  CellConfig cell;
  std::optional<MetricTable> table;
  std::string error;  // non-empty iff the cell failed

  bool ok() const { return table.has_value(); }
};

std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t cell_index,
                              std::uint64_t run_index);

// Single run of a cell: fresh environment, priors and (for ER) graph from
// the run's seed, then summarized. `stream_index` is the cell index, or the
// environment group under common random numbers.
RunSummary simulate_run(const CellConfig& cell, const SystemConfig& config,
                        std::uint64_t master_seed, std::uint64_t stream_index,
                        std::uint64_t run_index);

// Called once per finished cell, in cell order.
using CellCallback = std::function<void(std::size_t, const CellResult&)>;

// Reference executor: runs every cell and run in order on one thread.
std::vector<CellResult> execute_serial(const ExperimentSpec& spec,
                                       const CellCallback& on_cell = {});

// OpenMP executor. Runs are computed in parallel in blocks and folded in
// run-index order, so results are bit-identical to execute_serial() for any
// worker count.
std::vector<CellResult> execute_parallel(const ExperimentSpec& spec,
                                         int workers,
                                         const CellCallback& on_cell = {});

// Dispatches to the serial path for workers <= 1.
std::vector<CellResult> execute(const ExperimentSpec& spec, int workers,
                                const CellCallback& on_cell = {});

// Cumulative performance over an (phi1, phi2) grid with the given step.
struct LearningRateGrid {
  std::vector<double> rates;
  std::vector<ScalarStat> performance;  // row-major [phi1][phi2]

  const ScalarStat& at(std::size_t i, std::size_t j) const {
    return performance[i * rates.size() + j];
  }
};

std::vector<double> rate_grid(double step);

LearningRateGrid sweep_learning_rates(const CellConfig& base, double step,
                                      std::size_t n_runs,
                                      std::uint64_t master_seed, int workers);

}  // namespace vicar
