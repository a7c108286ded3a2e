#include "vicar/env.hpp"

#include <stdexcept>
#include <string>

namespace vicar {

TaskEnvironment sample_environment(std::size_t m, double pi_max, double alpha,
                                   double noise_half_width, Rng& rng) {
  if (m == 0) throw std::invalid_argument("m must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be > 0");
  // alpha == pi_max is allowed: non-peak draws come from the open interval
  // (0, alpha), so the peak stays unique.
  if (!(alpha <= pi_max))
    throw std::invalid_argument("alpha must not exceed pi_max");
  if (!(noise_half_width >= 0.0))
    throw std::invalid_argument("noise half-width must be >= 0");

  TaskEnvironment env;
  env.noise_half_width = noise_half_width;
  env.expected_payoffs.resize(m);
  env.optimal_index = uniform_index(rng, m);
  for (std::size_t j = 0; j < m; ++j) {
    env.expected_payoffs[j] =
        j == env.optimal_index ? pi_max : alpha * uniform_open01(rng);
  }
  return env;
}

double realize_payoff(const TaskEnvironment& env, std::size_t action, Rng& rng) {
  if (action >= env.size())
    throw std::out_of_range("action " + std::to_string(action) +
                            " out of range");
  const double base = env.expected_payoffs[action];
  if (env.noise_half_width == 0.0) return base;
  return base + env.noise_half_width * (2.0 * uniform_open01(rng) - 1.0);
}

}  // namespace vicar
