#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "vicar/system.hpp"

namespace vicar {

// Per-period mean over runs with its standard error.
struct Series {
  std::vector<double> value;
  std::vector<double> std_err;
  std::size_t n_runs = 0;
};

struct ScalarStat {
  double value = 0.0;
  double std_err = 0.0;
  std::size_t n_runs = 0;
};

enum class ScopeLevel { kAgent, kSystem };

// ---------------------------------------------------------------------------
// Trace-level metrics. Each sums per-run values in sorted order, so results
// are exactly invariant to the order of `traces`. All throw
// std::invalid_argument on an empty set or mismatched horizons.

Series mean_payoff_series(std::span<const RunTrace> traces);
// Fraction of runs in which every agent chose the optimal alternative.
Series joint_optimal_series(std::span<const RunTrace> traces);
// Fraction of runs in which `agent` chose the optimal alternative.
Series marginal_optimal_series(std::span<const RunTrace> traces,
                               std::size_t agent);
// Fraction of runs in which all agents chose the same alternative.
Series same_action_series(std::span<const RunTrace> traces);
// Fraction of (run, agent) pairs whose action differs from the previous
// period's. Entry 0 (t = 1) has no predecessor and is reported as 0.
// Requires T >= 2.
Series switch_prob_series(std::span<const RunTrace> traces);
// Running mean of mean_payoff through t, averaged over runs.
Series cumulative_payoff_series(std::span<const RunTrace> traces);

// Number of distinct alternatives tried over the whole run: averaged over
// agents (kAgent) or counted on the union over agents (kSystem).
double search_scope(const RunTrace& trace, ScopeLevel level);
ScalarStat search_scope(std::span<const RunTrace> traces, ScopeLevel level);

// ---------------------------------------------------------------------------
// Streaming aggregation used by the harness. A RunSummary is the per-run
// reduction of a trace; MetricAccumulator folds summaries in the order they
// are added, so feeding runs in run-index order gives scheduling-independent
// results.

struct RunSummary {
  std::vector<double> mean_payoff;
  std::vector<std::uint8_t> all_optimal;
  std::vector<std::uint8_t> same_action;
  std::vector<double> switch_fraction;
  double agent_scope = 0.0;
  double system_scope = 0.0;
};

RunSummary summarize(const RunTrace& trace);

struct MetricTable {
  static constexpr std::array<std::string_view, 5> kSeriesNames = {
      "cumulative_payoff", "joint_optimal", "mean_payoff", "same_action",
      "switch_prob"};

  std::size_t horizon = 0;
  std::size_t n_runs = 0;
  Series mean_payoff;
  Series joint_optimal;
  Series same_action;
  Series switch_prob;
  Series cumulative_payoff;
  ScalarStat agent_scope;
  ScalarStat system_scope;

  const Series& series(std::string_view name) const;
};

class MetricAccumulator {
 public:
  explicit MetricAccumulator(std::size_t horizon);

  void add(const RunSummary& summary);
  MetricTable finish() const;
  std::size_t count() const { return n_runs_; }

 private:
  struct Moments {
    std::vector<double> sum;
    std::vector<double> sum_sq;
  };
  static void add_to(Moments& m, std::size_t t, double x);

  std::size_t horizon_;
  std::size_t n_runs_ = 0;
  Moments mean_payoff_, joint_optimal_, same_action_, switch_prob_,
      cumulative_;
  double agent_scope_sum_ = 0.0, agent_scope_sq_ = 0.0;
  double system_scope_sum_ = 0.0, system_scope_sq_ = 0.0;
};

}  // namespace vicar
