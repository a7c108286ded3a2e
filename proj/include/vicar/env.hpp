#pragma once

#include <cstddef>
#include <vector>

#include "vicar/random.hpp"

namespace vicar {

// A bandit task shared by all agents of a run. One alternative carries the
// peak payoff; the rest are drawn below `alpha`.
struct TaskEnvironment {
  std::vector<double> expected_payoffs;
  std::size_t optimal_index = 0;
  double noise_half_width = 0.0;

  std::size_t size() const { return expected_payoffs.size(); }
  double max_payoff() const { return expected_payoffs[optimal_index]; }
};

// Throws std::invalid_argument for m == 0, alpha <= 0, alpha > pi_max or a
// negative noise width.
TaskEnvironment sample_environment(std::size_t m, double pi_max, double alpha,
                                   double noise_half_width, Rng& rng);

// Expected payoff of `action` plus U(-eps, eps) noise. With eps == 0 no
// random number is consumed.
double realize_payoff(const TaskEnvironment& env, std::size_t action, Rng& rng);

}  // namespace vicar
