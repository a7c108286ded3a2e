#include "vicar/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace vicar {

namespace {

// exp(-60) is below 1e-26; such terms cannot move a sum that already holds
// the max-shifted term exp(0) = 1, so the sampler skips evaluating them.
constexpr double kNegligibleExponent = -60.0;

void check_rate(double rate, const char* name) {
  if (!(rate >= 0.0 && rate <= 1.0))
    throw std::invalid_argument(fmt::format("{} must lie in [0, 1], got {}",
                                            name, rate));
}

}  // namespace

Temperature Temperature::softmax(double tau) {
  if (!(tau >= 0.0))
    throw std::invalid_argument(fmt::format("tau must be >= 0, got {}", tau));
  if (tau == 0.0) return greedy();
  return Temperature(tau, false);
}

std::string Temperature::to_string() const {
  return greedy_ ? std::string("greedy") : fmt::format("{}", tau_);
}

Temperature Temperature::parse(const std::string& text) {
  if (text == "greedy") return greedy();
  std::size_t used = 0;
  double tau = 0.0;
  try {
    tau = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed tau '" + text + "'");
  }
  if (used != text.size())
    throw std::invalid_argument("malformed tau '" + text + "'");
  return softmax(tau);
}

std::string to_string(UpdateRule rule) {
  return rule == UpdateRule::kEwa ? "ewa" : "avg";
}

UpdateRule parse_update_rule(const std::string& text) {
  if (text == "ewa" || text == "EWA") return UpdateRule::kEwa;
  if (text == "avg" || text == "averaging" || text == "AVERAGING")
    return UpdateRule::kAveraging;
  throw std::invalid_argument("unknown update rule '" + text + "'");
}

double BeliefVector::max_value() const {
  return *std::max_element(values.begin(), values.end());
}

void AgentParams::validate() const {
  check_rate(learning_rate, "learning rate");
  check_rate(observation_rate, "observation rate");
  check_rate(sharing_weight, "sharing weight");
  if (!(tau_low > 0.0 && tau_high > 0.0))
    throw std::invalid_argument("tau_low and tau_high must be > 0");
  if (tau_low > tau_high)
    throw std::invalid_argument("tau_low must not exceed tau_high");
  if (!(inspiration_threshold >= 0.0))
    throw std::invalid_argument("inspiration threshold must be >= 0");
}

BeliefVector init_priors(std::size_t m, Rng& rng) {
  if (m == 0) throw std::invalid_argument("m must be positive");
  std::vector<double> values(m);
  for (auto& v : values) v = uniform_open01(rng);
  return BeliefVector(std::move(values));
}

std::vector<double> choice_probabilities(const BeliefVector& beliefs,
                                         Temperature tau) {
  const auto& r = beliefs.values;
  std::vector<double> p(r.size(), 0.0);
  if (r.empty()) return p;
  const double top = beliefs.max_value();
  if (tau.is_greedy()) {
    const auto ties = static_cast<double>(std::count(r.begin(), r.end(), top));
    for (std::size_t j = 0; j < r.size(); ++j)
      if (r[j] == top) p[j] = 1.0 / ties;
    return p;
  }
  double total = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    p[j] = std::exp((r[j] - top) / tau.value());
    total += p[j];
  }
  for (auto& x : p) x /= total;
  return p;
}

std::size_t choose(const BeliefVector& beliefs, Temperature tau, Rng& rng) {
  const auto& r = beliefs.values;
  const std::size_t m = r.size();
  const double top = beliefs.max_value();

  if (tau.is_greedy()) {
    std::size_t ties = 0;
    std::size_t first = 0;
    for (std::size_t j = 0; j < m; ++j) {
      if (r[j] == top) {
        if (ties == 0) first = j;
        ++ties;
      }
    }
    if (ties == 1) return first;
    std::size_t pick = uniform_index(rng, ties);
    for (std::size_t j = first; j < m; ++j) {
      if (r[j] == top && pick-- == 0) return j;
    }
    return first;
  }

  thread_local std::vector<double> weights;
  weights.resize(m);
  const double inv_tau = 1.0 / tau.value();
  double total = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double z = (r[j] - top) * inv_tau;
    weights[j] = z < kNegligibleExponent ? 0.0 : std::exp(z);
    total += weights[j];
  }
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  const double target = dist(rng) * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < m; ++j) {
    if (weights[j] == 0.0) continue;
    cumulative += weights[j];
    last_positive = j;
    if (target < cumulative) return j;
  }
  return last_positive;
}

void SoftmaxSampler::rebuild(const std::vector<double>& values, double top) {
  reference_ = top;
  weights_.resize(values.size());
  seen_ = values;
  for (std::size_t j = 0; j < values.size(); ++j)
    weights_[j] = std::exp((values[j] - reference_) * inv_tau_);
  valid_ = true;
}

std::size_t SoftmaxSampler::sample(const BeliefVector& beliefs, Temperature tau,
                                   Rng& rng) {
  if (tau.is_greedy()) return choose(beliefs, tau, rng);

  // Keep exponents relative to the reference well inside double range.
  constexpr double kMaxDrift = 200.0;
  const auto& r = beliefs.values;
  const std::size_t m = r.size();
  const double inv_tau = 1.0 / tau.value();
  double total = 0.0;
  bool stale = !valid_ || inv_tau != inv_tau_ || m != seen_.size();
  if (!stale) {
    double top = r[0];
    for (std::size_t j = 0; j < m; ++j) {
      if (r[j] != seen_[j]) {
        seen_[j] = r[j];
        weights_[j] = std::exp((r[j] - reference_) * inv_tau_);
      }
      top = std::max(top, r[j]);
      total += weights_[j];
    }
    stale = std::abs((top - reference_) * inv_tau) > kMaxDrift;
  }
  if (stale) {
    inv_tau_ = inv_tau;
    rebuild(r, beliefs.max_value());
    total = 0.0;
    for (double w : weights_) total += w;
  }

  std::uniform_real_distribution<double> dist(0.0, 1.0);
  const double target = dist(rng) * total;
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    if (weights_[j] == 0.0) continue;
    cumulative += weights_[j];
    last_positive = j;
    if (target < cumulative) return j;
  }
  return last_positive;
}

void incorporate_sample(BeliefVector& beliefs, std::size_t action,
                        double target, double rate, UpdateRule rule) {
  if (action >= beliefs.size())
    throw std::out_of_range(fmt::format("action {} out of range", action));
  if (rate == 0.0) return;
  double& r = beliefs.values[action];
  if (rule == UpdateRule::kEwa) {
    r += rate * (target - r);
  } else {
    auto& n = beliefs.sample_counts[action];
    r += (target - r) / (static_cast<double>(n) + 1.0);
    ++n;
  }
}

}  // namespace vicar
