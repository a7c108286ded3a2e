#include "vicar/system.hpp"

#include <algorithm>
#include <stdexcept>

#include <fmt/core.h>

namespace vicar {

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::kNone: return "NONE";
    case Mode::kBeliefSharing: return "BELIEF_SHARING";
    case Mode::kObservational: return "OBSERVATIONAL";
    case Mode::kImitation: return "IMITATION";
    case Mode::kInspiration: return "INSPIRATION";
    case Mode::kHybrid: return "HYBRID";
  }
  return "?";
}

Mode parse_mode(const std::string& text) {
  for (Mode m : {Mode::kNone, Mode::kBeliefSharing, Mode::kObservational,
                 Mode::kImitation, Mode::kInspiration, Mode::kHybrid}) {
    if (text == to_string(m)) return m;
  }
  throw std::invalid_argument("unknown mode '" + text + "'");
}

void SystemConfig::validate(std::size_t m) const {
  if (horizon < 1) throw std::invalid_argument("horizon T must be >= 1");
  if (agents.size() != topology.node_count())
    throw std::invalid_argument(
        fmt::format("{} agent parameter sets for {} nodes", agents.size(),
                    topology.node_count()));
  for (const auto& a : agents) a.validate();
  sharing.validate(m);
}

RunState init_state(const SystemConfig& config,
                    std::vector<BeliefVector> priors) {
  const std::size_t n = config.agents.size();
  if (priors.size() != n)
    throw std::invalid_argument(
        fmt::format("{} prior vectors for {} agents", priors.size(), n));
  RunState state;
  state.beliefs = std::move(priors);
  state.temperatures.reserve(n);
  for (const auto& a : config.agents) state.temperatures.push_back(a.temperature);
  state.actions.assign(n, 0);
  state.payoffs.assign(n, 0.0);
  state.max_before.assign(n, 0.0);
  state.samplers.resize(n);
  return state;
}

namespace {

bool observes(Mode mode) {
  return mode == Mode::kObservational || mode == Mode::kHybrid;
}

bool shares(Mode mode) {
  return mode == Mode::kBeliefSharing || mode == Mode::kHybrid;
}

DimensionSet chosen_by(const std::vector<std::size_t>& actions,
                       const std::vector<std::size_t>& senders) {
  std::vector<std::size_t> dims;
  dims.reserve(senders.size());
  for (std::size_t k : senders) dims.push_back(actions[k]);
  std::sort(dims.begin(), dims.end());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());
  return DimensionSet::of(std::move(dims));
}

void blend_neighbor_mean(RunState& state, const SystemConfig& config,
                         const Adjacency& adjacency,
                         const DimensionSet& shared) {
  state.pre_blend = state.beliefs;
  const auto& pre = state.pre_blend;
  const std::size_t m = pre.front().size();
  for (std::size_t i = 0; i < pre.size(); ++i) {
    const auto& neighbours = adjacency[i];
    if (neighbours.empty()) continue;
    const double w = config.agents[i].sharing_weight;
    const double degree = static_cast<double>(neighbours.size());
    auto blend_dim = [&](std::size_t j) {
      double sum = 0.0;
      for (std::size_t k : neighbours) sum += pre[k].values[j];
      state.beliefs[i].values[j] = blend_value(pre[i].values[j], sum / degree, w);
    };
    if (config.sharing.mask == ShareMask::kChosenOnly) {
      for (std::size_t j : chosen_by(state.actions, neighbours).dims) blend_dim(j);
    } else if (shared.all) {
      for (std::size_t j = 0; j < m; ++j) blend_dim(j);
    } else {
      for (std::size_t j : shared.dims) blend_dim(j);
    }
  }
}

void blend_pairwise(RunState& state, const SystemConfig& config,
                    const Adjacency& adjacency, const DimensionSet& shared) {
  for (std::size_t i = 0; i < adjacency.size(); ++i) {
    for (std::size_t k : adjacency[i]) {
      if (k <= i) continue;
      DimensionSet for_i = shared;
      DimensionSet for_k = shared;
      if (config.sharing.mask == ShareMask::kChosenOnly) {
        for_i = DimensionSet::of({state.actions[k]});
        for_k = DimensionSet::of({state.actions[i]});
      }
      auto [bi, bk] = blend_beliefs(state.beliefs[i], state.beliefs[k],
                                    config.agents[i].sharing_weight,
                                    config.agents[k].sharing_weight, for_i,
                                    for_k);
      state.beliefs[i] = std::move(bi);
      state.beliefs[k] = std::move(bk);
    }
  }
}

}  // namespace

void step(RunState& state, const SystemConfig& config,
          const TaskEnvironment& env, const Adjacency& adjacency, Rng& rng) {
  const std::size_t n = state.beliefs.size();
  const std::size_t m = env.size();
  const std::size_t period = state.period + 1;

  for (std::size_t i = 0; i < n; ++i) {
    if (config.mode == Mode::kInspiration)
      state.max_before[i] = state.beliefs[i].max_value();
    state.actions[i] =
        state.samplers[i].sample(state.beliefs[i], state.temperatures[i], rng);
  }

  if (config.full_feedback) {
    state.feedback.resize(n * m);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j)
        state.feedback[i * m + j] = realize_payoff(env, j, rng);
      state.payoffs[i] = state.feedback[i * m + state.actions[i]];
    }
  } else {
    for (std::size_t i = 0; i < n; ++i)
      state.payoffs[i] = realize_payoff(env, state.actions[i], rng);
  }

  for (std::size_t i = 0; i < n; ++i) {
    const AgentParams& params = config.agents[i];
    BeliefVector& beliefs = state.beliefs[i];
    auto observe_neighbours = [&] {
      for (std::size_t k : adjacency[i])
        observe_complete(beliefs, state.actions[k], state.payoffs[k],
                         params.observation_rate, params.rule);
    };

    if (observes(config.mode) && config.observed_first) observe_neighbours();
    if (config.full_feedback) {
      for (std::size_t j = 0; j < m; ++j)
        update_experiential(beliefs, j, state.feedback[i * m + j], params);
    } else {
      update_experiential(beliefs, state.actions[i], state.payoffs[i], params);
    }
    if (observes(config.mode) && !config.observed_first) observe_neighbours();

    if (config.mode == Mode::kImitation) {
      for (std::size_t k : adjacency[i])
        imitation_update(beliefs, state.actions[k], params.observation_rate,
                         env.max_payoff());
    }
  }

  if (shares(config.mode) && config.sharing.is_sharing_period(period)) {
    DimensionSet shared = DimensionSet::every();
    if (config.sharing.mask == ShareMask::kRandomK)
      shared = DimensionSet::of(
          random_dimensions(m, config.sharing.random_dims, rng));
    if (config.sharing.blend == BlendRule::kNeighborMean)
      blend_neighbor_mean(state, config, adjacency, shared);
    else
      blend_pairwise(state, config, adjacency, shared);
  }

  if (config.mode == Mode::kInspiration) {
    for (std::size_t i = 0; i < n; ++i) {
      if (adjacency[i].empty()) continue;
      double observed = state.payoffs[adjacency[i].front()];
      for (std::size_t k : adjacency[i]) observed = std::max(observed, state.payoffs[k]);
      const AgentParams& params = config.agents[i];
      state.temperatures[i] = Temperature::softmax(
          inspiration_tau(observed, state.max_before[i],
                          params.inspiration_threshold, params.tau_low,
                          params.tau_high));
    }
  }

  state.period = period;
}

RunTrace run(const SystemConfig& config, const TaskEnvironment& env,
             std::vector<BeliefVector> priors, const Adjacency& adjacency,
             std::uint64_t seed) {
  config.validate(env.size());
  if (adjacency.size() != config.agents.size())
    throw std::invalid_argument("adjacency does not match agent count");
  for (const auto& p : priors) {
    if (p.size() != env.size())
      throw std::invalid_argument("prior length does not match m");
  }

  const std::size_t n = config.agents.size();
  RunTrace trace;
  trace.horizon = config.horizon;
  trace.n_agents = n;
  trace.optimal_index = env.optimal_index;
  trace.actions.resize(config.horizon * n);
  trace.payoffs.resize(config.horizon * n);
  trace.all_matched.resize(config.horizon);

  Rng rng(seed);
  RunState state = init_state(config, std::move(priors));
  for (std::size_t t = 0; t < config.horizon; ++t) {
    step(state, config, env, adjacency, rng);
    bool matched = true;
    for (std::size_t i = 0; i < n; ++i) {
      trace.actions[t * n + i] = static_cast<std::uint32_t>(state.actions[i]);
      trace.payoffs[t * n + i] = state.payoffs[i];
      matched = matched && state.actions[i] == state.actions[0];
    }
    trace.all_matched[t] = matched ? 1 : 0;
  }
  trace.final_beliefs = std::move(state.beliefs);
  return trace;
}

RunTrace run(const SystemConfig& config, const TaskEnvironment& env,
             std::vector<BeliefVector> priors, std::uint64_t seed) {
  Rng topo_rng(mix64(seed ^ 0x746f706f6c6f6779ULL));
  const Adjacency adjacency = build_topology(config.topology, topo_rng);
  return run(config, env, std::move(priors), adjacency, seed);
}

}  // namespace vicar
