#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vicar/random.hpp"

namespace vicar {

// Softmax temperature, or the greedy (tau -> 0) limit.
class Temperature {
 public:
  static Temperature greedy() { return Temperature(0.0, true); }
  // Throws std::invalid_argument for tau < 0; tau == 0 maps to greedy.
  static Temperature softmax(double tau);

  bool is_greedy() const { return greedy_; }
  double value() const { return tau_; }
  std::string to_string() const;
  // Inverse of to_string(): "greedy" or a number.
  static Temperature parse(const std::string& text);

  friend bool operator==(const Temperature&, const Temperature&) = default;

 private:
  Temperature(double tau, bool greedy) : tau_(tau), greedy_(greedy) {}
  double tau_;
  bool greedy_;
};

enum class UpdateRule { kEwa, kAveraging };

std::string to_string(UpdateRule rule);
UpdateRule parse_update_rule(const std::string& text);

// An agent's representation: one belief per alternative. sample_counts is
// only read by the averaging rule; the prior counts as one observation.
struct BeliefVector {
  std::vector<double> values;
  std::vector<std::uint32_t> sample_counts;

  BeliefVector() = default;
  explicit BeliefVector(std::vector<double> v)
      : values(std::move(v)), sample_counts(values.size(), 1) {}

  std::size_t size() const { return values.size(); }
  double max_value() const;

  friend bool operator==(const BeliefVector&, const BeliefVector&) = default;
};

struct AgentParams {
  double learning_rate = 0.5;     // own experience
  double observation_rate = 0.5;  // complete observation and imitation
  double sharing_weight = 0.5;    // weight put on the other's beliefs
  Temperature temperature = Temperature::greedy();
  double tau_low = 0.01;
  double tau_high = 0.1;
  double inspiration_threshold = 1.5;
  UpdateRule rule = UpdateRule::kEwa;

  void validate() const;
};

BeliefVector init_priors(std::size_t m, Rng& rng);

std::vector<double> choice_probabilities(const BeliefVector& beliefs,
                                         Temperature tau);

// Samples an action from choice_probabilities(). Greedy ties are broken
// uniformly; a unique greedy maximum consumes no random numbers.
std::size_t choose(const BeliefVector& beliefs, Temperature tau, Rng& rng);

// Draws the same distribution as choose() while reusing exp() terms for
// belief entries that did not change since the previous call. Weights are
// kept relative to a reference point that is re-centred on the maximum when
// it drifts far enough to threaten overflow. One instance per agent.
class SoftmaxSampler {
 public:
  std::size_t sample(const BeliefVector& beliefs, Temperature tau, Rng& rng);

 private:
  void rebuild(const std::vector<double>& values, double top);

  std::vector<double> weights_;
  std::vector<double> seen_;
  double reference_ = 0.0;
  double inv_tau_ = 0.0;
  bool valid_ = false;
};

// Moves the belief on `action` toward `target`. EWA uses `rate`; averaging
// takes a running mean over sample_counts. A zero rate switches the update
// off under either rule.
void incorporate_sample(BeliefVector& beliefs, std::size_t action,
                        double target, double rate, UpdateRule rule);

inline void update_experiential(BeliefVector& beliefs, std::size_t action,
                                double payoff, const AgentParams& params) {
  incorporate_sample(beliefs, action, payoff, params.learning_rate,
                     params.rule);
}

}  // namespace vicar
