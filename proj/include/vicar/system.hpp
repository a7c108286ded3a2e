#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vicar/agents.hpp"
#include "vicar/env.hpp"
#include "vicar/topology.hpp"
#include "vicar/vicarious.hpp"

namespace vicar {

// What ego can learn from alter each period.
enum class Mode {
  kNone,           // isolated learners
  kBeliefSharing,  // beliefs
  kObservational,  // action and outcome
  kImitation,      // action only
  kInspiration,    // outcome only
  kHybrid,         // observation plus belief sharing
};

std::string to_string(Mode mode);
Mode parse_mode(const std::string& text);

struct SystemConfig {
  Mode mode = Mode::kNone;
  Topology topology = Topology::dyad();
  std::vector<AgentParams> agents;  // one per node
  SharingPolicy sharing;
  // Every agent sees a payoff for every alternative every period.
  bool full_feedback = false;
  std::size_t horizon = 1;
  // When own and observed actions coincide, apply the observed payoff
  // before the own one. Only used to probe order sensitivity.
  bool observed_first = false;

  void validate(std::size_t m) const;
};

// Mutable state of one run between periods.
struct RunState {
  std::vector<BeliefVector> beliefs;
  std::vector<Temperature> temperatures;  // tau used in the next choice
  std::vector<std::size_t> actions;       // last period
  std::vector<double> payoffs;            // last period
  std::size_t period = 0;                 // periods completed

  std::vector<SoftmaxSampler> samplers;

  // Scratch, reused across periods.
  std::vector<double> max_before;
  std::vector<BeliefVector> pre_blend;
  std::vector<double> feedback;
};

RunState init_state(const SystemConfig& config,
                    std::vector<BeliefVector> priors);

// Advances one period: choose, realize, learn from own payoff, learn from
// neighbours' actions/payoffs, blend beliefs, then set next period's tau.
void step(RunState& state, const SystemConfig& config,
          const TaskEnvironment& env, const Adjacency& adjacency, Rng& rng);

struct RunTrace {
  std::size_t horizon = 0;
  std::size_t n_agents = 0;
  std::size_t optimal_index = 0;
  std::vector<std::uint32_t> actions;  // horizon x n_agents, row-major
  std::vector<double> payoffs;         // horizon x n_agents
  std::vector<std::uint8_t> all_matched;  // per period
  std::vector<BeliefVector> final_beliefs;

  std::size_t action(std::size_t t, std::size_t agent) const {
    return actions[t * n_agents + agent];
  }
  double payoff(std::size_t t, std::size_t agent) const {
    return payoffs[t * n_agents + agent];
  }
  bool optimal(std::size_t t, std::size_t agent) const {
    return action(t, agent) == optimal_index;
  }
};

// T applications of step(); deterministic in all arguments.
RunTrace run(const SystemConfig& config, const TaskEnvironment& env,
             std::vector<BeliefVector> priors, const Adjacency& adjacency,
             std::uint64_t seed);

// Builds the adjacency from a stream derived from `seed`.
RunTrace run(const SystemConfig& config, const TaskEnvironment& env,
             std::vector<BeliefVector> priors, std::uint64_t seed);

}  // namespace vicar
