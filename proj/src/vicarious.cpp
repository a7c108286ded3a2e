#include "vicar/vicarious.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <fmt/core.h>

namespace vicar {

std::string to_string(ShareMask mask) {
  switch (mask) {
    case ShareMask::kAll: return "all";
    case ShareMask::kChosenOnly: return "chosen";
    case ShareMask::kRandomK: return "random";
  }
  return "?";
}

ShareMask parse_share_mask(const std::string& text) {
  if (text == "all") return ShareMask::kAll;
  if (text == "chosen") return ShareMask::kChosenOnly;
  if (text == "random") return ShareMask::kRandomK;
  throw std::invalid_argument("unknown sharing mask '" + text + "'");
}

std::string to_string(BlendRule rule) {
  return rule == BlendRule::kNeighborMean ? "mean" : "pairwise";
}

BlendRule parse_blend_rule(const std::string& text) {
  if (text == "mean") return BlendRule::kNeighborMean;
  if (text == "pairwise") return BlendRule::kPairwiseSequential;
  throw std::invalid_argument("unknown blend rule '" + text + "'");
}

void SharingPolicy::validate(std::size_t m) const {
  if (frequency < 1) throw std::invalid_argument("sharing frequency must be >= 1");
  if (mask == ShareMask::kRandomK && (random_dims < 1 || random_dims > m))
    throw std::invalid_argument(
        fmt::format("random sharing needs 1 <= k <= m, got k={} m={}",
                    random_dims, m));
}

std::pair<BeliefVector, BeliefVector> blend_beliefs(
    const BeliefVector& first, const BeliefVector& second, double weight_first,
    double weight_second, const DimensionSet& dims_for_first,
    const DimensionSet& dims_for_second) {
  if (first.size() != second.size())
    throw std::invalid_argument(fmt::format(
        "belief length mismatch: {} vs {}", first.size(), second.size()));

  BeliefVector out_first = first;
  BeliefVector out_second = second;
  auto apply = [&](BeliefVector& out, const BeliefVector& own,
                   const BeliefVector& other, double w,
                   const DimensionSet& dims) {
    if (dims.all) {
      for (std::size_t j = 0; j < own.size(); ++j)
        out.values[j] = blend_value(own.values[j], other.values[j], w);
    } else {
      for (std::size_t j : dims.dims) {
        if (j >= own.size())
          throw std::out_of_range(fmt::format("dimension {} out of range", j));
        out.values[j] = blend_value(own.values[j], other.values[j], w);
      }
    }
  };
  apply(out_first, first, second, weight_first, dims_for_first);
  apply(out_second, second, first, weight_second, dims_for_second);
  return {std::move(out_first), std::move(out_second)};
}

void imitation_update(BeliefVector& beliefs, std::size_t other_action,
                      double observation_rate, double pi_max) {
  if (other_action >= beliefs.size())
    throw std::out_of_range(fmt::format("action {} out of range", other_action));
  double& r = beliefs.values[other_action];
  r += observation_rate * (pi_max - r);
}

double inspiration_tau(double other_payoff_prev, double own_max_belief_prev,
                       double threshold, double tau_low, double tau_high) {
  return other_payoff_prev > threshold * own_max_belief_prev ? tau_high
                                                             : tau_low;
}

std::vector<std::size_t> random_dimensions(std::size_t m, std::size_t k,
                                           Rng& rng) {
  if (k > m) throw std::invalid_argument("cannot pick more dimensions than m");
  // Partial Fisher-Yates.
  std::vector<std::size_t> pool(m);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + uniform_index(rng, m - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace vicar
