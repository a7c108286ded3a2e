#include "vicar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <fmt/core.h>

namespace vicar {

namespace {

std::size_t common_horizon(std::span<const RunTrace> traces) {
  if (traces.empty()) throw std::invalid_argument("empty trace set");
  const std::size_t horizon = traces.front().horizon;
  for (const auto& tr : traces) {
    if (tr.horizon != horizon)
      throw std::invalid_argument(fmt::format(
          "traces have different horizons ({} vs {})", tr.horizon, horizon));
  }
  return horizon;
}

// Mean and standard error of `xs`; sorts `xs` so the result depends only on
// the multiset of values.
std::pair<double, double> sorted_mean_se(std::vector<double>& xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

template <typename PerRun>
Series series_over_runs(std::span<const RunTrace> traces, PerRun per_run) {
  const std::size_t horizon = common_horizon(traces);
  Series s;
  s.n_runs = traces.size();
  s.value.resize(horizon);
  s.std_err.resize(horizon);
  std::vector<double> xs(traces.size());
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t r = 0; r < traces.size(); ++r) xs[r] = per_run(traces[r], t);
    std::tie(s.value[t], s.std_err[t]) = sorted_mean_se(xs);
  }
  return s;
}

double agents_mean_payoff(const RunTrace& tr, std::size_t t) {
  double sum = 0.0;
  for (std::size_t i = 0; i < tr.n_agents; ++i) sum += tr.payoff(t, i);
  return sum / static_cast<double>(tr.n_agents);
}

bool all_optimal(const RunTrace& tr, std::size_t t) {
  for (std::size_t i = 0; i < tr.n_agents; ++i)
    if (!tr.optimal(t, i)) return false;
  return true;
}

bool same_action(const RunTrace& tr, std::size_t t) {
  for (std::size_t i = 1; i < tr.n_agents; ++i)
    if (tr.action(t, i) != tr.action(t, 0)) return false;
  return true;
}

double switch_fraction(const RunTrace& tr, std::size_t t) {
  if (t == 0) return 0.0;
  std::size_t switched = 0;
  for (std::size_t i = 0; i < tr.n_agents; ++i)
    if (tr.action(t, i) != tr.action(t - 1, i)) ++switched;
  return static_cast<double>(switched) / static_cast<double>(tr.n_agents);
}

double standard_error(double sum, double sum_sq, std::size_t count) {
  if (count < 2) return 0.0;
  const double n = static_cast<double>(count);
  const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
  return std::sqrt(var / n);
}

}  // namespace

Series mean_payoff_series(std::span<const RunTrace> traces) {
  return series_over_runs(traces, agents_mean_payoff);
}

Series joint_optimal_series(std::span<const RunTrace> traces) {
  return series_over_runs(traces, [](const RunTrace& tr, std::size_t t) {
    return all_optimal(tr, t) ? 1.0 : 0.0;
  });
}

Series marginal_optimal_series(std::span<const RunTrace> traces,
                               std::size_t agent) {
  return series_over_runs(traces, [agent](const RunTrace& tr, std::size_t t) {
    if (agent >= tr.n_agents) throw std::out_of_range("agent out of range");
    return tr.optimal(t, agent) ? 1.0 : 0.0;
  });
}

Series same_action_series(std::span<const RunTrace> traces) {
  return series_over_runs(traces, [](const RunTrace& tr, std::size_t t) {
    return same_action(tr, t) ? 1.0 : 0.0;
  });
}

Series switch_prob_series(std::span<const RunTrace> traces) {
  if (common_horizon(traces) < 2)
    throw std::invalid_argument("switching needs T >= 2");
  return series_over_runs(traces, switch_fraction);
}

Series cumulative_payoff_series(std::span<const RunTrace> traces) {
  const std::size_t horizon = common_horizon(traces);
  // Running means per run, computed once.
  std::vector<std::vector<double>> running(traces.size(),
                                           std::vector<double>(horizon));
  for (std::size_t r = 0; r < traces.size(); ++r) {
    double sum = 0.0;
    for (std::size_t t = 0; t < horizon; ++t) {
      sum += agents_mean_payoff(traces[r], t);
      running[r][t] = sum / static_cast<double>(t + 1);
    }
  }
  Series s;
  s.n_runs = traces.size();
  s.value.resize(horizon);
  s.std_err.resize(horizon);
  std::vector<double> xs(traces.size());
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t r = 0; r < traces.size(); ++r) xs[r] = running[r][t];
    std::tie(s.value[t], s.std_err[t]) = sorted_mean_se(xs);
  }
  return s;
}

double search_scope(const RunTrace& trace, ScopeLevel level) {
  std::vector<std::uint32_t> seen;
  if (level == ScopeLevel::kSystem) {
    seen = trace.actions;
    std::sort(seen.begin(), seen.end());
    return static_cast<double>(
        std::unique(seen.begin(), seen.end()) - seen.begin());
  }
  double total = 0.0;
  for (std::size_t i = 0; i < trace.n_agents; ++i) {
    seen.clear();
    for (std::size_t t = 0; t < trace.horizon; ++t)
      seen.push_back(static_cast<std::uint32_t>(trace.action(t, i)));
    std::sort(seen.begin(), seen.end());
    total += static_cast<double>(
        std::unique(seen.begin(), seen.end()) - seen.begin());
  }
  return total / static_cast<double>(trace.n_agents);
}

ScalarStat search_scope(std::span<const RunTrace> traces, ScopeLevel level) {
  if (traces.empty()) throw std::invalid_argument("empty trace set");
  std::vector<double> xs;
  xs.reserve(traces.size());
  for (const auto& tr : traces) xs.push_back(search_scope(tr, level));
  ScalarStat s;
  s.n_runs = traces.size();
  std::tie(s.value, s.std_err) = sorted_mean_se(xs);
  return s;
}

RunSummary summarize(const RunTrace& trace) {
  RunSummary s;
  const std::size_t horizon = trace.horizon;
  s.mean_payoff.resize(horizon);
  s.all_optimal.resize(horizon);
  s.same_action.resize(horizon);
  s.switch_fraction.resize(horizon);
  for (std::size_t t = 0; t < horizon; ++t) {
    s.mean_payoff[t] = agents_mean_payoff(trace, t);
    s.all_optimal[t] = all_optimal(trace, t) ? 1 : 0;
    s.same_action[t] = same_action(trace, t) ? 1 : 0;
    s.switch_fraction[t] = switch_fraction(trace, t);
  }
  s.agent_scope = search_scope(trace, ScopeLevel::kAgent);
  s.system_scope = search_scope(trace, ScopeLevel::kSystem);
  return s;
}

const Series& MetricTable::series(std::string_view name) const {
  if (name == "mean_payoff") return mean_payoff;
  if (name == "joint_optimal") return joint_optimal;
  if (name == "same_action") return same_action;
  if (name == "switch_prob") return switch_prob;
  if (name == "cumulative_payoff") return cumulative_payoff;
  throw std::invalid_argument("unknown metric '" + std::string(name) + "'");
}

MetricAccumulator::MetricAccumulator(std::size_t horizon) : horizon_(horizon) {
  for (Moments* m : {&mean_payoff_, &joint_optimal_, &same_action_,
                     &switch_prob_, &cumulative_}) {
    m->sum.assign(horizon, 0.0);
    m->sum_sq.assign(horizon, 0.0);
  }
}

void MetricAccumulator::add_to(Moments& m, std::size_t t, double x) {
  m.sum[t] += x;
  m.sum_sq[t] += x * x;
}

void MetricAccumulator::add(const RunSummary& summary) {
  if (summary.mean_payoff.size() != horizon_)
    throw std::invalid_argument("run summary horizon mismatch");
  double running = 0.0;
  for (std::size_t t = 0; t < horizon_; ++t) {
    add_to(mean_payoff_, t, summary.mean_payoff[t]);
    add_to(joint_optimal_, t, summary.all_optimal[t]);
    add_to(same_action_, t, summary.same_action[t]);
    add_to(switch_prob_, t, summary.switch_fraction[t]);
    running += summary.mean_payoff[t];
    add_to(cumulative_, t, running / static_cast<double>(t + 1));
  }
  agent_scope_sum_ += summary.agent_scope;
  agent_scope_sq_ += summary.agent_scope * summary.agent_scope;
  system_scope_sum_ += summary.system_scope;
  system_scope_sq_ += summary.system_scope * summary.system_scope;
  ++n_runs_;
}

MetricTable MetricAccumulator::finish() const {
  if (n_runs_ == 0) throw std::logic_error("no runs accumulated");
  const double n = static_cast<double>(n_runs_);
  auto to_series = [&](const Moments& m) {
    Series s;
    s.n_runs = n_runs_;
    s.value.resize(horizon_);
    s.std_err.resize(horizon_);
    for (std::size_t t = 0; t < horizon_; ++t) {
      s.value[t] = m.sum[t] / n;
      s.std_err[t] = standard_error(m.sum[t], m.sum_sq[t], n_runs_);
    }
    return s;
  };
  MetricTable table;
  table.horizon = horizon_;
  table.n_runs = n_runs_;
  table.mean_payoff = to_series(mean_payoff_);
  table.joint_optimal = to_series(joint_optimal_);
  table.same_action = to_series(same_action_);
  table.switch_prob = to_series(switch_prob_);
  table.cumulative_payoff = to_series(cumulative_);
  table.agent_scope = {agent_scope_sum_ / n,
                       standard_error(agent_scope_sum_, agent_scope_sq_, n_runs_),
                       n_runs_};
  table.system_scope = {
      system_scope_sum_ / n,
      standard_error(system_scope_sum_, system_scope_sq_, n_runs_), n_runs_};
  return table;
}

}  // namespace vicar
