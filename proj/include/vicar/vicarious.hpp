#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "vicar/agents.hpp"
#include "vicar/random.hpp"

namespace vicar {

// Which belief dimensions travel in one sharing event.
enum class ShareMask {
  kAll,
  kChosenOnly,  // the alternatives the sender(s) chose this period
  kRandomK,     // a fresh random subset of size k every sharing period
};

std::string to_string(ShareMask mask);
ShareMask parse_share_mask(const std::string& text);

// How a node with several neighbours blends.
enum class BlendRule {
  kNeighborMean,        // one step toward the mean of neighbours' beliefs
  kPairwiseSequential,  // one dyadic blend per edge, in ascending edge order
};

std::string to_string(BlendRule rule);
BlendRule parse_blend_rule(const std::string& text);

struct SharingPolicy {
  std::size_t frequency = 1;  // share in periods t with t % frequency == 0
  ShareMask mask = ShareMask::kAll;
  std::size_t random_dims = 1;
  BlendRule blend = BlendRule::kNeighborMean;

  void validate(std::size_t m) const;
  bool is_sharing_period(std::size_t period) const {
    return period % frequency == 0;
  }
};

// A set of belief dimensions; `all` covers every alternative.
struct DimensionSet {
  bool all = true;
  std::vector<std::size_t> dims;

  static DimensionSet every() { return {}; }
  static DimensionSet of(std::vector<std::size_t> d) {
    return {false, std::move(d)};
  }
};

// (1 - w) * own + w * other, clamped to [min, max] of the pair so rounding
// cannot leave the segment.
inline double blend_value(double own, double other, double w) {
  const double x = (1.0 - w) * own + w * other;
  return own < other ? std::clamp(x, own, other) : std::clamp(x, other, own);
}

// Simultaneous weighted average: both outputs are computed from the two
// inputs. `weight_first` is the weight the first agent puts on the second
// agent's beliefs, and vice versa. Sample counts are untouched.
std::pair<BeliefVector, BeliefVector> blend_beliefs(
    const BeliefVector& first, const BeliefVector& second, double weight_first,
    double weight_second, const DimensionSet& dims_for_first,
    const DimensionSet& dims_for_second);

inline std::pair<BeliefVector, BeliefVector> blend_beliefs(
    const BeliefVector& first, const BeliefVector& second, double weight_first,
    double weight_second, const DimensionSet& dims = DimensionSet::every()) {
  return blend_beliefs(first, second, weight_first, weight_second, dims, dims);
}

// Complete observation: the other's action and payoff enter exactly like
// own experience, at the observation rate.
inline void observe_complete(BeliefVector& beliefs, std::size_t other_action,
                             double other_payoff, double observation_rate,
                             UpdateRule rule) {
  incorporate_sample(beliefs, other_action, other_payoff, observation_rate,
                     rule);
}

// Action-only observation: the observed alternative moves toward the known
// peak payoff.
void imitation_update(BeliefVector& beliefs, std::size_t other_action,
                      double observation_rate, double pi_max);

// Outcome-only observation: explore harder (tau_high) when the other's last
// payoff beat `threshold` times our best belief; equality stays at tau_low.
double inspiration_tau(double other_payoff_prev, double own_max_belief_prev,
                       double threshold, double tau_low, double tau_high);

// Random subset of `k` distinct dimensions out of `m`, ascending.
std::vector<std::size_t> random_dimensions(std::size_t m, std::size_t k,
                                           Rng& rng);

}  // namespace vicar
