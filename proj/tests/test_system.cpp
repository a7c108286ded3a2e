#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "oracle_bridge.hpp"
#include "vicar/harness.hpp"
#include "vicar/metrics.hpp"
#include "vicar/system.hpp"

using namespace vicar;

namespace {

SystemConfig dyad_config(Mode mode, double phi = 0.5) {
  SystemConfig c;
  c.mode = mode;
  c.horizon = 10;
  c.agents.resize(2);
  for (auto& a : c.agents) {
    a.learning_rate = a.observation_rate = a.sharing_weight = phi;
    a.temperature = Temperature::greedy();
  }
  return c;
}

std::vector<BeliefVector> priors_for(std::size_t n, std::size_t m, Rng& rng) {
  std::vector<BeliefVector> p;
  for (std::size_t i = 0; i < n; ++i) p.push_back(init_priors(m, rng));
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// Topology

TEST_CASE("dyad adjacency") {
  Rng rng(1);
  CHECK(build_topology(Topology::dyad(), rng) == Adjacency{{1}, {0}});
}

TEST_CASE("5x5 torus lattice has degree four everywhere") {
  Rng rng(2);
  const auto adj = build_topology(Topology::lattice(5, 5), rng);
  REQUIRE(adj.size() == 25);
  for (std::size_t i = 0; i < adj.size(); ++i) {
    CHECK(adj[i].size() == 4);
    for (auto k : adj[i]) {
      CHECK(k != i);
      CHECK(std::count(adj[k].begin(), adj[k].end(), i) == 1);
    }
  }
  // Node 0 wraps to the last column and the last row.
  CHECK(adj[0] == std::vector<std::size_t>{1, 4, 5, 20});
  CHECK(edge_count(adj) == 50);
  CHECK_THROWS_AS(Topology::lattice(2, 5), std::invalid_argument);
}

TEST_CASE("ER(100, 0.02) averages 99 edges") {
  Rng rng(3);
  const auto topo = Topology::erdos_renyi(100, 0.02);
  double total = 0.0;
  const int samples = 10'000;
  for (int s = 0; s < samples; ++s) {
    const auto adj = build_topology(topo, rng);
    for (std::size_t i = 0; i < adj.size(); ++i)
      for (auto k : adj[i]) REQUIRE(std::count(adj[k].begin(), adj[k].end(), i) == 1);
    total += static_cast<double>(edge_count(adj));
  }
  CHECK(std::abs(total / samples - 99.0) < 2.0);
}

TEST_CASE("topology text round trip") {
  for (const auto& t : {Topology::dyad(), Topology::erdos_renyi(100, 0.02),
                        Topology::lattice(5, 7)}) {
    CHECK(Topology::parse(t.to_string()) == t);
  }
  CHECK(Topology::parse("lattice(5x5)").node_count() == 25);
  CHECK_THROWS_AS(Topology::parse("ring(5)"), std::invalid_argument);
  CHECK_THROWS_AS(Topology::erdos_renyi(10, 1.5), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Step

TEST_CASE("single arm converges and never moves") {
  auto config = dyad_config(Mode::kNone);
  config.horizon = 200;
  TaskEnvironment env{{0.7}, 0, 0.1};
  Rng rng(4);
  auto trace = run(config, env, priors_for(2, 1, rng), 11);
  for (std::size_t t = 0; t < trace.horizon; ++t) CHECK(trace.action(t, 0) == 0);
  CHECK(std::abs(trace.final_beliefs[0].values[0] - 0.7) < 0.1);
}

TEST_CASE("half-weight belief sharing leaves identical beliefs every period") {
  auto config = dyad_config(Mode::kBeliefSharing);
  config.agents[0].temperature = config.agents[1].temperature = Temperature::softmax(0.1);
  Rng rng(5);
  auto env = sample_environment(20, 1.0, 0.8, 0.5, rng);
  auto state = init_state(config, priors_for(2, 20, rng));
  const Adjacency adj{{1}, {0}};
  for (int t = 0; t < 50; ++t) {
    step(state, config, env, adj, rng);
    CHECK(state.beliefs[0].values == state.beliefs[1].values);
  }
}

TEST_CASE("observation with different arms changes exactly two dimensions") {
  auto config = dyad_config(Mode::kObservational);
  Rng rng(6);
  const Adjacency adj{{1}, {0}};
  int checked = 0;
  for (int rep = 0; rep < 200; ++rep) {
    auto env = sample_environment(8, 1.0, 0.8, 0.1, rng);
    auto state = init_state(config, priors_for(2, 8, rng));
    const auto before = state.beliefs;
    step(state, config, env, adj, rng);
    if (state.actions[0] == state.actions[1]) continue;
    ++checked;
    for (int i = 0; i < 2; ++i) {
      int changed = 0;
      for (std::size_t j = 0; j < 8; ++j)
        changed += state.beliefs[i].values[j] != before[i].values[j];
      CHECK(changed == 2);
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("inspiration sets next period's tau from the other's payoff") {
  SystemConfig config = dyad_config(Mode::kInspiration);
  for (auto& a : config.agents) {
    a.temperature = Temperature::softmax(0.05);
    a.tau_low = 0.01;
    a.tau_high = 0.1;
    a.inspiration_threshold = 1.5;
  }
  Rng rng(7);
  auto env = sample_environment(5, 1.0, 0.8, 1.0, rng);
  auto state = init_state(config, priors_for(2, 5, rng));
  const Adjacency adj{{1}, {0}};
  // Period 1 uses the configured base tau.
  CHECK(state.temperatures[0] == Temperature::softmax(0.05));
  int high = 0;
  for (int t = 0; t < 500; ++t) {
    const double max0 = state.beliefs[0].max_value();
    const double max1 = state.beliefs[1].max_value();
    step(state, config, env, adj, rng);
    const double expect0 = state.payoffs[1] > 1.5 * max0 ? 0.1 : 0.01;
    const double expect1 = state.payoffs[0] > 1.5 * max1 ? 0.1 : 0.01;
    CHECK(state.temperatures[0].value() == expect0);
    CHECK(state.temperatures[1].value() == expect1);
    high += expect0 == 0.1;
  }
  CHECK(high > 0);
}

TEST_CASE("imitation pulls the observed arm toward the peak") {
  auto config = dyad_config(Mode::kImitation, 0.5);
  TaskEnvironment env{{0.3, 1.0, 0.5}, 1, 0.0};
  std::vector<BeliefVector> priors = {BeliefVector({0.9, 0.1, 0.2}),
                                      BeliefVector({0.1, 0.2, 0.8})};
  auto state = init_state(config, priors);
  Rng rng(8);
  step(state, config, env, {{1}, {0}}, rng);
  // Agent 0 chose arm 0 (own 0.9 -> 0.6), saw arm 2 (0.2 -> 0.6).
  CHECK(state.beliefs[0].values[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(state.beliefs[0].values[1] == 0.1);
  CHECK(state.beliefs[0].values[2] == doctest::Approx(0.6).epsilon(1e-15));
  // Agent 1 chose arm 2 (0.8 -> 0.65), saw arm 0 (0.1 -> 0.55).
  CHECK(state.beliefs[1].values[2] == doctest::Approx(0.65).epsilon(1e-15));
  CHECK(state.beliefs[1].values[0] == doctest::Approx(0.55).epsilon(1e-15));
}

TEST_CASE("chosen-only sharing blends just the other's arm") {
  auto config = dyad_config(Mode::kBeliefSharing, 0.5);
  config.sharing.mask = ShareMask::kChosenOnly;
  TaskEnvironment env{{0.3, 1.0, 0.5}, 1, 0.0};
  std::vector<BeliefVector> priors = {BeliefVector({0.9, 0.1, 0.2}),
                                      BeliefVector({0.1, 0.2, 0.8})};
  auto state = init_state(config, priors);
  Rng rng(9);
  step(state, config, env, {{1}, {0}}, rng);
  // After own updates: agent 0 {0.6, 0.1, 0.2}, agent 1 {0.1, 0.2, 0.65}.
  // Agent 0 takes in arm 2, agent 1 takes in arm 0.
  CHECK(state.beliefs[0].values[0] == 0.6);
  CHECK(state.beliefs[0].values[1] == 0.1);
  CHECK(state.beliefs[0].values[2] == doctest::Approx(0.425).epsilon(1e-15));
  CHECK(state.beliefs[1].values[0] == doctest::Approx(0.35).epsilon(1e-15));
  CHECK(state.beliefs[1].values[2] == 0.65);
}

TEST_CASE("infrequent sharing only blends on multiples of k") {
  auto config = dyad_config(Mode::kBeliefSharing, 0.5);
  config.sharing.frequency = 3;
  Rng rng(10);
  auto env = sample_environment(6, 1.0, 0.8, 0.3, rng);
  auto state = init_state(config, priors_for(2, 6, rng));
  const Adjacency adj{{1}, {0}};
  for (int t = 1; t <= 9; ++t) {
    step(state, config, env, adj, rng);
    const bool equal = state.beliefs[0].values == state.beliefs[1].values;
    if (t % 3 == 0) CHECK(equal);
  }
}

// ---------------------------------------------------------------------------
// Run

TEST_CASE("horizon bounds and determinism") {
  auto config = dyad_config(Mode::kObservational);
  config.agents[0].temperature = config.agents[1].temperature = Temperature::softmax(0.05);
  Rng rng(11);
  auto env = sample_environment(10, 1.0, 0.8, 0.1, rng);
  const auto priors = priors_for(2, 10, rng);
  config.horizon = 0;
  CHECK_THROWS_AS(run(config, env, priors, 1), std::invalid_argument);
  config.horizon = 1;
  CHECK(run(config, env, priors, 1).horizon == 1);
  config.horizon = 300;
  auto a = run(config, env, priors, 77);
  auto b = run(config, env, priors, 77);
  CHECK(a.actions == b.actions);
  CHECK(a.payoffs == b.payoffs);
  CHECK(a.final_beliefs == b.final_beliefs);
  auto c = run(config, env, priors, 78);
  CHECK(c.payoffs != a.payoffs);
}

TEST_CASE("greedy two-arm hand simulation") {
  // Arm 1 starts believed best (0.9) but pays 0.5; arm 0 pays 0.7 with
  // prior 0.6. With phi = 1 the agent pulls arm 1 once, learns 0.5, and
  // moves to arm 0 for good.
  auto config = dyad_config(Mode::kNone, 1.0);
  config.horizon = 4;
  TaskEnvironment env{{0.7, 0.5}, 0, 0.0};
  std::vector<BeliefVector> priors = {BeliefVector({0.6, 0.9}),
                                      BeliefVector({0.6, 0.4})};
  auto trace = run(config, env, priors, {{1}, {0}}, 3);
  for (std::size_t t = 0; t < 4; ++t) {
    CHECK(trace.action(t, 0) == (t == 0 ? 1u : 0u));
    CHECK(trace.action(t, 1) == 0u);
  }
  // Had arm 0's prior been below 0.5, agent 0 would have stayed on arm 1.
  priors[0] = BeliefVector({0.45, 0.9});
  trace = run(config, env, priors, {{1}, {0}}, 3);
  for (std::size_t t = 0; t < 4; ++t) CHECK(trace.action(t, 0) == 1u);
}

TEST_CASE("greedy, noiseless, phi = 1 settles within m periods") {
  Rng rng(12);
  auto config = dyad_config(Mode::kNone, 1.0);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t m = 2 + static_cast<std::size_t>(rep) % 9;
    config.horizon = 3 * m;
    auto env = sample_environment(m, 1.0, 0.8, 0.0, rng);
    auto trace = run(config, env, priors_for(2, m, rng), 1);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t t = m; t < trace.horizon; ++t)
        CHECK(trace.action(t, i) == trace.action(m, i));
  }
}

TEST_CASE("library traces match the hand-simulation oracle") {
  std::mt19937_64 rng(2024);
  int compared = 0;
  for (auto ch : {oracle::Channel::kNone, oracle::Channel::kObserve,
                  oracle::Channel::kShare, oracle::Channel::kBoth,
                  oracle::Channel::kImitate}) {
    for (int rep = 0; rep < 400; ++rep) {
      const auto in = oracle::random_instance(rng, ch);
      const auto expect = oracle::simulate(in);
      if (!expect) continue;  // tied beliefs: not hand-checkable
      const auto got = oracle::run_library(in);
      CHECK(oracle::same_trace(*expect, got));
      CHECK(oracle::same_metrics(oracle::metrics(*expect, in.optimal), summarize(got)));
      ++compared;
    }
  }
  CHECK(compared > 1500);
}

TEST_CASE("hybrid collapses to its parts") {
  Rng rng(13);
  for (int rep = 0; rep < 20; ++rep) {
    auto env = sample_environment(30, 1.0, 0.8, 0.3, rng);
    const auto priors = priors_for(2, 30, rng);
    auto base = dyad_config(Mode::kHybrid);
    base.horizon = 200;
    for (auto& a : base.agents) a.temperature = Temperature::softmax(0.05);

    auto hybrid = base;
    for (auto& a : hybrid.agents) a.sharing_weight = 0.0;
    auto obs = base;
    obs.mode = Mode::kObservational;
    auto h = run(hybrid, env, priors, 5), o = run(obs, env, priors, 5);
    CHECK(h.actions == o.actions);
    CHECK(h.payoffs == o.payoffs);
    CHECK(h.final_beliefs == o.final_beliefs);

    hybrid = base;
    for (auto& a : hybrid.agents) a.observation_rate = 0.0;
    auto bs = base;
    bs.mode = Mode::kBeliefSharing;
    h = run(hybrid, env, priors, 6);
    auto s = run(bs, env, priors, 6);
    CHECK(h.actions == s.actions);
    CHECK(h.payoffs == s.payoffs);
    CHECK(h.final_beliefs == s.final_beliefs);
  }
}

TEST_CASE("two-node networks reproduce the dyad exactly") {
  CellConfig dyad;
  dyad.mode = Mode::kBeliefSharing;
  dyad.m = 20;
  dyad.horizon = 100;
  dyad.tau = Temperature::softmax(0.05);
  dyad.epsilon = 0.5;
  CellConfig er = dyad;
  er.topology = Topology::erdos_renyi(2, 1.0);
  for (std::uint64_t r = 0; r < 50; ++r) {
    for (auto blend : {BlendRule::kNeighborMean, BlendRule::kPairwiseSequential}) {
      er.sharing.blend = blend;
      const auto a = simulate_run(dyad, dyad.system_config(), 9, 0, r);
      const auto b = simulate_run(er, er.system_config(), 9, 0, r);
      CHECK(a.mean_payoff == b.mean_payoff);
      CHECK(a.all_optimal == b.all_optimal);
    }
  }
}

TEST_CASE("networked runs: lattice and ER") {
  for (auto topo : {Topology::lattice(5, 5), Topology::erdos_renyi(100, 0.02)}) {
    for (Mode mode : {Mode::kNone, Mode::kObservational, Mode::kBeliefSharing}) {
      CellConfig c;
      c.mode = mode;
      c.topology = topo;
      c.m = 50;
      c.epsilon = 1.0;
      c.tau = Temperature::softmax(0.01);
      c.horizon = 30;
      const auto s = simulate_run(c, c.system_config(), 1, 0, 0);
      CHECK(s.mean_payoff.size() == 30);
      for (double p : s.mean_payoff) CHECK(std::isfinite(p));
      CHECK(s.system_scope >= s.agent_scope);
    }
  }
}

TEST_CASE("own-vs-observed order has no systematic effect") {
  // fig2 settings, 10^4 runs, mean payoff at T = 1000.
  ExperimentSpec spec;
  spec.n_runs = 10'000;
  spec.master_seed = 314;
  spec.common_random_numbers = true;
  CellConfig c;
  c.mode = Mode::kObservational;
  spec.cells.push_back(c);
  c.observed_first = true;
  c.variant = "observed-first";
  spec.cells.push_back(c);
  const auto results = execute(spec, 4);
  const auto& a = results[0].table->mean_payoff;
  const auto& b = results[1].table->mean_payoff;
  const double diff = std::abs(a.value.back() - b.value.back());
  const double se = std::hypot(a.std_err.back(), b.std_err.back());
  MESSAGE("order effect at T: " << diff << " (2 SE = " << 2 * se << ")");
  CHECK(diff < 2.0 * se);
}
