#include "vicar/harness.hpp"

#include <cmath>
#include <map>
#include <new>
#include <stdexcept>

#include <fmt/core.h>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vicar {

namespace {

constexpr std::uint64_t kDynamicsSalt = 0x64796e616d696373ULL;
constexpr std::size_t kBlockRuns = 256;

// Index of the random stream each cell uses: its own position, or the
// first cell with the same environment key under common random numbers.
std::vector<std::uint64_t> stream_indices(const ExperimentSpec& spec) {
  std::vector<std::uint64_t> out(spec.cells.size());
  std::map<std::string, std::uint64_t> groups;
  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    if (!spec.common_random_numbers) {
      out[c] = c;
      continue;
    }
    auto [it, inserted] =
        groups.emplace(spec.cells[c].environment_key(), groups.size());
    out[c] = it->second;
  }
  return out;
}

}  // namespace

SystemConfig CellConfig::system_config() const {
  SystemConfig config;
  config.mode = mode;
  config.topology = topology;
  config.sharing = sharing;
  config.full_feedback = full_feedback;
  config.horizon = horizon;
  config.observed_first = observed_first;
  const std::size_t n = topology.node_count();
  config.agents.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    AgentParams& a = config.agents[i];
    const bool even = i % 2 == 0;
    a.learning_rate = even ? phi1 : phi2;
    a.rule = even ? rule1 : rule2;
    a.observation_rate = phi_ol.value_or(a.learning_rate);
    a.sharing_weight = phi_bs;
    a.temperature = tau;
    a.tau_low = tau_low;
    a.tau_high = tau_high;
    a.inspiration_threshold = threshold;
  }
  return config;
}

std::string CellConfig::environment_key() const {
  return fmt::format("{}|{}|{}|{}|{}", m, pi_max, alpha, epsilon,
                     topology.to_string());
}

void CellConfig::validate() const {
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  if (!(alpha > 0.0 && alpha <= pi_max))
    throw std::invalid_argument(
        fmt::format("need 0 < alpha <= pi_max, got alpha={} pi_max={}", alpha,
                    pi_max));
  if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
  system_config().validate(m);
}

void ExperimentSpec::validate() const {
  if (cells.empty()) throw std::invalid_argument("experiment grid is empty");
  if (n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
  for (const auto& c : cells) c.validate();
}

std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t cell_index,
                              std::uint64_t run_index) {
  return mix64(mix64(mix64(master_seed) ^ cell_index) ^ run_index);
}

RunSummary simulate_run(const CellConfig& cell, const SystemConfig& config,
                        std::uint64_t master_seed, std::uint64_t stream_index,
                        std::uint64_t run_index) {
  const std::uint64_t seed = derive_run_seed(master_seed, stream_index, run_index);
  Rng setup(seed);
  const TaskEnvironment env =
      sample_environment(cell.m, cell.pi_max, cell.alpha, cell.epsilon, setup);
  std::vector<BeliefVector> priors;
  priors.reserve(config.agents.size());
  for (std::size_t i = 0; i < config.agents.size(); ++i)
    priors.push_back(init_priors(cell.m, setup));
  const Adjacency adjacency = build_topology(config.topology, setup);
  return summarize(
      run(config, env, std::move(priors), adjacency, mix64(seed ^ kDynamicsSalt)));
}

std::vector<CellResult> execute_serial(const ExperimentSpec& spec,
                                       const CellCallback& on_cell) {
  spec.validate();
  const auto streams = stream_indices(spec);
  std::vector<CellResult> results;
  results.reserve(spec.cells.size());
  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    CellResult result{spec.cells[c], std::nullopt, {}};
    try {
      const SystemConfig config = result.cell.system_config();
      MetricAccumulator acc(result.cell.horizon);
      for (std::size_t r = 0; r < spec.n_runs; ++r)
        acc.add(simulate_run(result.cell, config, spec.master_seed, streams[c], r));
      result.table = acc.finish();
    } catch (const std::bad_alloc&) {
      result.error = "out of memory";
    } catch (const std::exception& e) {
      result.error = e.what();
    }
    results.push_back(std::move(result));
    if (on_cell) on_cell(c, results.back());
  }
  return results;
}

std::vector<CellResult> execute_parallel(const ExperimentSpec& spec,
                                         int workers,
                                         const CellCallback& on_cell) {
  spec.validate();
  if (workers < 1) workers = 1;
  const auto streams = stream_indices(spec);
  std::vector<CellResult> results;
  results.reserve(spec.cells.size());
  std::vector<RunSummary> block(kBlockRuns);
  std::vector<std::string> errors(kBlockRuns);

  for (std::size_t c = 0; c < spec.cells.size(); ++c) {
    CellResult result{spec.cells[c], std::nullopt, {}};
    try {
      const SystemConfig config = result.cell.system_config();
      MetricAccumulator acc(result.cell.horizon);
      for (std::size_t start = 0; start < spec.n_runs && result.error.empty();
           start += kBlockRuns) {
        const auto count =
            static_cast<std::int64_t>(std::min(kBlockRuns, spec.n_runs - start));
#pragma omp parallel for schedule(dynamic, 4) num_threads(workers)
        for (std::int64_t k = 0; k < count; ++k) {
          try {
            block[k] = simulate_run(result.cell, config, spec.master_seed,
                                    streams[c], start + static_cast<std::size_t>(k));
          } catch (const std::bad_alloc&) {
            errors[k] = "out of memory";
          } catch (const std::exception& e) {
            errors[k] = e.what();
          }
        }
        for (std::int64_t k = 0; k < count; ++k) {
          if (!errors[k].empty()) {
            result.error = errors[k];
            break;
          }
          acc.add(block[k]);
        }
      }
      if (result.error.empty()) result.table = acc.finish();
    } catch (const std::bad_alloc&) {
      result.error = "out of memory";
    } catch (const std::exception& e) {
      result.error = e.what();
    }
    for (auto& e : errors) e.clear();
    results.push_back(std::move(result));
    if (on_cell) on_cell(c, results.back());
  }
  return results;
}

std::vector<CellResult> execute(const ExperimentSpec& spec, int workers,
                                const CellCallback& on_cell) {
  return workers <= 1 ? execute_serial(spec, on_cell)
                      : execute_parallel(spec, workers, on_cell);
}

std::vector<double> rate_grid(double step) {
  if (!(step > 0.0 && step <= 1.0))
    throw std::invalid_argument("grid step must lie in (0, 1]");
  const double intervals = std::round(1.0 / step);
  if (std::abs(intervals * step - 1.0) > 1e-9)
    throw std::invalid_argument(fmt::format("grid step {} does not divide [0, 1]", step));
  const auto n = static_cast<std::size_t>(intervals);
  std::vector<double> rates(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    rates[i] = static_cast<double>(i) / intervals;
  return rates;
}

LearningRateGrid sweep_learning_rates(const CellConfig& base, double step,
                                      std::size_t n_runs,
                                      std::uint64_t master_seed, int workers) {
  LearningRateGrid grid;
  grid.rates = rate_grid(step);
  ExperimentSpec spec;
  spec.name = base.preset;
  spec.n_runs = n_runs;
  spec.master_seed = master_seed;
  for (double p1 : grid.rates) {
    for (double p2 : grid.rates) {
      CellConfig cell = base;
      cell.phi1 = p1;
      cell.phi2 = p2;
      spec.cells.push_back(cell);
    }
  }
  for (const auto& result : execute(spec, workers)) {
    if (!result.ok())
      throw std::runtime_error("learning-rate sweep cell failed: " + result.error);
    const auto& cum = result.table->cumulative_payoff;
    grid.performance.push_back(
        {cum.value.back(), cum.std_err.back(), cum.n_runs});
  }
  return grid;
}

}  // namespace vicar
