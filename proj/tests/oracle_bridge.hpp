#pragma once

#include <random>

#include "oracle.hpp"
#include "vicar/metrics.hpp"
#include "vicar/system.hpp"

namespace oracle {

inline vicar::Mode to_mode(Channel ch) {
  switch (ch) {
    case Channel::kNone: return vicar::Mode::kNone;
    case Channel::kObserve: return vicar::Mode::kObservational;
    case Channel::kShare: return vicar::Mode::kBeliefSharing;
    case Channel::kBoth: return vicar::Mode::kHybrid;
    case Channel::kImitate: return vicar::Mode::kImitation;
  }
  return vicar::Mode::kNone;
}

inline vicar::SystemConfig to_config(const Instance& in) {
  vicar::SystemConfig config;
  config.mode = to_mode(in.channel);
  config.horizon = in.horizon;
  config.full_feedback = in.full_feedback;
  config.agents.resize(2);
  for (int i = 0; i < 2; ++i) {
    auto& a = config.agents[i];
    a.learning_rate = in.phi[i];
    a.observation_rate = in.phi_ol[i];
    a.sharing_weight = in.phi_bs[i];
    a.temperature = vicar::Temperature::greedy();
    a.rule = in.averaging[i] ? vicar::UpdateRule::kAveraging : vicar::UpdateRule::kEwa;
  }
  return config;
}

inline vicar::RunTrace run_library(const Instance& in, std::uint64_t seed = 1) {
  vicar::TaskEnvironment env{in.payoffs, in.optimal, 0.0};
  std::vector<vicar::BeliefVector> priors = {vicar::BeliefVector(in.priors[0]),
                                             vicar::BeliefVector(in.priors[1])};
  return vicar::run(to_config(in), env, std::move(priors), {{1}, {0}}, seed);
}

// m in {1, 2, 3}, T in [1, 5], random rates drawn from a small lattice so
// that exact values such as 0 and 1 are hit often.
inline Instance random_instance(std::mt19937_64& rng, Channel ch) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rates[] = {0.0, 0.25, 0.5, 0.7, 1.0};
  auto rate = [&] { return rates[rng() % 5]; };
  Instance in;
  const std::size_t m = 1 + rng() % 3;
  in.payoffs.resize(m);
  in.optimal = rng() % m;
  for (std::size_t j = 0; j < m; ++j)
    in.payoffs[j] = j == in.optimal ? 1.0 : 0.8 * u(rng);
  for (auto& p : in.priors) {
    p.resize(m);
    for (auto& x : p) x = u(rng);
  }
  for (int i = 0; i < 2; ++i) {
    in.phi[i] = rate();
    in.phi_ol[i] = rate();
    in.phi_bs[i] = rate();
    in.averaging[i] = rng() % 4 == 0;
  }
  in.channel = ch;
  in.full_feedback = rng() % 5 == 0;
  in.horizon = 1 + rng() % 5;
  return in;
}

inline bool same_trace(const Trace& expect, const vicar::RunTrace& got) {
  if (got.horizon != expect.actions.size() || got.n_agents != 2) return false;
  for (std::size_t t = 0; t < got.horizon; ++t) {
    for (std::size_t i = 0; i < 2; ++i) {
      if (got.action(t, i) != expect.actions[t][i]) return false;
      if (got.payoff(t, i) != expect.payoffs[t][i]) return false;
    }
  }
  for (std::size_t i = 0; i < 2; ++i)
    if (got.final_beliefs[i].values != expect.final_beliefs[i]) return false;
  return true;
}

inline bool same_metrics(const Metrics& expect, const vicar::RunSummary& got) {
  const std::size_t horizon = expect.mean_payoff.size();
  if (got.mean_payoff.size() != horizon) return false;
  double running = 0.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    if (got.mean_payoff[t] != expect.mean_payoff[t]) return false;
    if (got.all_optimal[t] != expect.joint_optimal[t]) return false;
    if (got.same_action[t] != expect.same_action[t]) return false;
    if (got.switch_fraction[t] != expect.switch_frac[t]) return false;
    running += got.mean_payoff[t];
    if (running / static_cast<double>(t + 1) != expect.cumulative[t]) return false;
  }
  return got.agent_scope == expect.agent_scope &&
         got.system_scope == expect.system_scope;
}

}  // namespace oracle
