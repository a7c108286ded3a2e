#pragma once

// Straight-line re-derivation of dyad dynamics for tiny, noise-free, greedy
// instances. Nothing here calls into the library's update code, so matching
// traces are an independent check of the pipeline order and arithmetic.

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <vector>

namespace oracle {

enum class Channel { kNone, kObserve, kShare, kBoth, kImitate };

struct Instance {
  std::vector<double> payoffs;  // expected payoffs, no noise
  std::size_t optimal = 0;
  std::array<std::vector<double>, 2> priors;
  std::array<double, 2> phi{0.5, 0.5};
  std::array<double, 2> phi_ol{0.5, 0.5};
  std::array<double, 2> phi_bs{0.5, 0.5};
  std::array<bool, 2> averaging{false, false};
  Channel channel = Channel::kNone;
  bool full_feedback = false;
  std::size_t horizon = 5;
};

struct Trace {
  std::vector<std::array<std::size_t, 2>> actions;
  std::vector<std::array<double, 2>> payoffs;
  std::array<std::vector<double>, 2> final_beliefs;
};

// Greedy pick; nullopt when the maximum is tied (the library would then
// draw a random number and the instance is not hand-checkable).
inline std::optional<std::size_t> argmax(const std::vector<double>& r) {
  std::size_t best = 0;
  for (std::size_t j = 1; j < r.size(); ++j)
    if (r[j] > r[best]) best = j;
  for (std::size_t j = 0; j < r.size(); ++j)
    if (j != best && r[j] == r[best]) return std::nullopt;
  return best;
}

inline std::optional<Trace> simulate(const Instance& in) {
  const std::size_t m = in.payoffs.size();
  std::array<std::vector<double>, 2> r = in.priors;
  std::array<std::vector<double>, 2> n = {std::vector<double>(m, 1.0),
                                          std::vector<double>(m, 1.0)};
  auto learn = [&](int i, std::size_t j, double target, double rate) {
    if (rate == 0.0) return;
    if (in.averaging[i]) {
      r[i][j] = r[i][j] + (target - r[i][j]) / (n[i][j] + 1.0);
      n[i][j] += 1.0;
    } else {
      r[i][j] = r[i][j] + rate * (target - r[i][j]);
    }
  };

  Trace tr;
  for (std::size_t t = 0; t < in.horizon; ++t) {
    std::array<std::size_t, 2> a{};
    for (int i = 0; i < 2; ++i) {
      auto pick = argmax(r[i]);
      if (!pick) return std::nullopt;
      a[i] = *pick;
    }
    const std::array<double, 2> pay = {in.payoffs[a[0]], in.payoffs[a[1]]};
    tr.actions.push_back(a);
    tr.payoffs.push_back(pay);

    for (int i = 0; i < 2; ++i) {
      const int other = 1 - i;
      if (in.full_feedback) {
        for (std::size_t j = 0; j < m; ++j) learn(i, j, in.payoffs[j], in.phi[i]);
      } else {
        learn(i, a[i], pay[i], in.phi[i]);
      }
      if (in.channel == Channel::kObserve || in.channel == Channel::kBoth)
        learn(i, a[other], pay[other], in.phi_ol[i]);
      if (in.channel == Channel::kImitate) {
        const double peak = in.payoffs[in.optimal];
        r[i][a[other]] = r[i][a[other]] + in.phi_ol[i] * (peak - r[i][a[other]]);
      }
    }
    if (in.channel == Channel::kShare || in.channel == Channel::kBoth) {
      const auto r0 = r[0];
      const auto r1 = r[1];
      auto mix = [](double own, double other, double w) {
        const double x = (1.0 - w) * own + w * other;
        return std::clamp(x, std::min(own, other), std::max(own, other));
      };
      for (std::size_t j = 0; j < m; ++j) {
        r[0][j] = mix(r0[j], r1[j], in.phi_bs[0]);
        r[1][j] = mix(r1[j], r0[j], in.phi_bs[1]);
      }
    }
  }
  tr.final_beliefs = r;
  return tr;
}

// Hand-computed metrics of one trace.
struct Metrics {
  std::vector<double> mean_payoff, joint_optimal, same_action, switch_frac,
      cumulative;
  double agent_scope = 0.0;
  double system_scope = 0.0;
};

inline Metrics metrics(const Trace& tr, std::size_t optimal) {
  Metrics out;
  double running = 0.0;
  std::array<std::set<std::size_t>, 2> tried;
  std::set<std::size_t> both;
  for (std::size_t t = 0; t < tr.actions.size(); ++t) {
    const auto& a = tr.actions[t];
    const auto& p = tr.payoffs[t];
    out.mean_payoff.push_back((p[0] + p[1]) / 2.0);
    out.joint_optimal.push_back(a[0] == optimal && a[1] == optimal ? 1.0 : 0.0);
    out.same_action.push_back(a[0] == a[1] ? 1.0 : 0.0);
    double switches = 0.0;
    if (t > 0) {
      for (int i = 0; i < 2; ++i) switches += a[i] != tr.actions[t - 1][i] ? 1.0 : 0.0;
    }
    out.switch_frac.push_back(switches / 2.0);
    running += out.mean_payoff.back();
    out.cumulative.push_back(running / static_cast<double>(t + 1));
    for (int i = 0; i < 2; ++i) {
      tried[i].insert(a[i]);
      both.insert(a[i]);
    }
  }
  out.agent_scope =
      static_cast<double>(tried[0].size() + tried[1].size()) / 2.0;
  out.system_scope = static_cast<double>(both.size());
  return out;
}

}  // namespace oracle
