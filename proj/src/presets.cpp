#include "vicar/presets.hpp"

#include <functional>
#include <map>
#include <utility>

namespace vicar {

namespace {

using Cells = std::vector<CellConfig>;

const std::vector<Mode> kCoreModes = {Mode::kNone, Mode::kObservational,
                                      Mode::kBeliefSharing};

std::vector<Temperature> tau_variants() {
  return {Temperature::greedy(), Temperature::softmax(0.01),
          Temperature::softmax(0.1)};
}

Cells core_modes(const CellConfig& base) {
  Cells cells;
  for (Mode mode : kCoreModes) {
    CellConfig c = base;
    c.mode = mode;
    cells.push_back(c);
  }
  return cells;
}

void append(Cells& to, const Cells& from) {
  to.insert(to.end(), from.begin(), from.end());
}

// Settings shared by the learning-rate heatmaps.
CellConfig contingency_cell(const std::string& preset) {
  CellConfig c = baseline_cell(preset, Mode::kObservational);
  c.epsilon = 1.0;
  c.tau = Temperature::softmax(0.01);
  c.horizon = 50;
  return c;
}

// Full (phi1, phi2) grid for OBSERVATIONAL and BELIEF_SHARING.
Cells rate_heatmap(const CellConfig& base, const std::vector<Mode>& modes) {
  Cells cells;
  const auto rates = rate_grid(0.1);
  for (Mode mode : modes) {
    for (double p1 : rates) {
      for (double p2 : rates) {
        CellConfig c = base;
        c.mode = mode;
        c.phi1 = p1;
        c.phi2 = p2;
        cells.push_back(c);
      }
    }
  }
  return cells;
}

// Symmetric learning-rate sweep.
Cells rate_line(const CellConfig& base, const std::vector<Mode>& modes) {
  Cells cells;
  for (Mode mode : modes) {
    for (double p : rate_grid(0.1)) {
      CellConfig c = base;
      c.mode = mode;
      c.phi1 = c.phi2 = p;
      cells.push_back(c);
    }
  }
  return cells;
}

Cells fig2() {
  Cells cells = core_modes(baseline_cell("fig2", Mode::kNone));
  cells.push_back(baseline_cell("fig2", Mode::kHybrid));
  return cells;
}

Cells fig3c() {
  Cells cells;
  for (Temperature tau : tau_variants()) {
    CellConfig base = baseline_cell("fig3c", Mode::kNone);
    base.tau = tau;
    for (Mode mode : {Mode::kNone, Mode::kObservational}) {
      CellConfig c = base;
      c.mode = mode;
      cells.push_back(c);
    }
    for (double w : {0.5, 0.3, 0.1}) {
      CellConfig c = base;
      c.mode = Mode::kBeliefSharing;
      c.phi_bs = w;
      cells.push_back(c);
    }
  }
  return cells;
}

Cells fig4() {
  CellConfig base = baseline_cell("fig4", Mode::kNone);
  base.full_feedback = true;
  Cells cells = core_modes(base);
  for (double w : {0.3, 0.1}) {
    CellConfig c = base;
    c.mode = Mode::kBeliefSharing;
    c.phi_bs = w;
    cells.push_back(c);
  }
  return cells;
}

Cells fig_inspiration() {
  CellConfig base = baseline_cell("fig_inspiration", Mode::kNone);
  base.m = 5;
  base.tau = Temperature::softmax(0.01);
  base.horizon = 50;
  base.tau_low = 0.01;
  base.tau_high = 0.1;
  base.threshold = 1.5;
  Cells cells;
  for (double eps : {0.1, 1.0}) {
    base.epsilon = eps;
    append(cells, rate_line(base, {Mode::kNone, Mode::kInspiration}));
  }
  return cells;
}

Cells fig_imitation() {
  CellConfig base = baseline_cell("fig_imitation", Mode::kNone);
  base.m = 10;
  base.epsilon = 1.0;
  base.tau = Temperature::softmax(0.01);
  base.horizon = 50;
  return rate_line(base, {Mode::kNone, Mode::kImitation});
}

Cells fig_m() {
  Cells cells;
  for (std::size_t m : {10, 50}) {
    CellConfig base = contingency_cell("fig_m");
    base.m = m;
    append(cells, rate_heatmap(base, {Mode::kObservational, Mode::kBeliefSharing}));
  }
  return cells;
}

Cells fig_spike() {
  Cells cells;
  for (double pi_max : {1.0, 1.5}) {
    CellConfig base = contingency_cell("fig_spike");
    base.pi_max = pi_max;
    append(cells, rate_heatmap(base, {Mode::kObservational, Mode::kBeliefSharing}));
  }
  return cells;
}

Cells fig_t() {
  Cells cells;
  for (std::size_t horizon : {50, 1000}) {
    CellConfig base = contingency_cell("fig_T");
    base.horizon = horizon;
    append(cells, rate_heatmap(base, {Mode::kObservational, Mode::kBeliefSharing}));
  }
  return cells;
}

Cells app_a() {
  Cells cells;
  for (Temperature tau : tau_variants()) {
    CellConfig base = baseline_cell("appA", Mode::kNone);
    base.tau = tau;
    append(cells, core_modes(base));
  }
  return cells;
}

Cells app_b() {
  CellConfig base = contingency_cell("appB");
  base.m = 10;
  return rate_heatmap(base, kCoreModes);
}

Cells app_c() {
  CellConfig base = baseline_cell("appC", Mode::kNone);
  base.epsilon = 1.0;
  base.horizon = 100;
  base.tau = Temperature::softmax(0.01);
  base.scope_metrics = true;
  return core_modes(base);
}

Cells app_d() {
  const std::pair<UpdateRule, UpdateRule> pairings[] = {
      {UpdateRule::kEwa, UpdateRule::kEwa},
      {UpdateRule::kAveraging, UpdateRule::kEwa},
      {UpdateRule::kAveraging, UpdateRule::kAveraging}};
  Cells cells;
  for (auto [r1, r2] : pairings) {
    CellConfig base = baseline_cell("appD", Mode::kNone);
    base.tau = Temperature::softmax(0.01);
    base.rule1 = r1;
    base.rule2 = r2;
    base.variant = to_string(r1) + "-" + to_string(r2);
    append(cells, core_modes(base));
  }
  return cells;
}

Cells app_e() {
  Cells cells;
  for (UpdateRule rule : {UpdateRule::kEwa, UpdateRule::kAveraging}) {
    for (Temperature tau : tau_variants()) {
      CellConfig base = baseline_cell("appE", Mode::kNone);
      base.alpha = 1.0;
      base.epsilon = 0.0;
      base.tau = tau;
      base.rule1 = base.rule2 = rule;
      base.variant = to_string(rule);
      append(cells, core_modes(base));
    }
  }
  return cells;
}

Cells network_cells(const std::string& preset, const Topology& topology) {
  Cells cells;
  for (double pi_max : {1.0, 2.0}) {
    CellConfig base = baseline_cell(preset, Mode::kNone);
    base.topology = topology;
    base.pi_max = pi_max;
    base.epsilon = 1.0;
    base.tau = Temperature::softmax(0.01);
    base.horizon = 100;
    append(cells, core_modes(base));
  }
  return cells;
}

Cells app_f_er() { return network_cells("appF_er", Topology::erdos_renyi(100, 0.02)); }
Cells app_f_lattice() { return network_cells("appF_lattice", Topology::lattice(5, 5)); }

Cells app_f() {
  Cells cells = network_cells("appF", Topology::erdos_renyi(100, 0.02));
  append(cells, network_cells("appF", Topology::lattice(5, 5)));
  return cells;
}

Cells app_g() {
  Cells cells;
  // Limited dimensions, greedy.
  CellConfig a = baseline_cell("appG", Mode::kNone);
  append(cells, core_modes(a));
  for (ShareMask mask : {ShareMask::kChosenOnly, ShareMask::kRandomK}) {
    CellConfig c = a;
    c.mode = Mode::kBeliefSharing;
    c.sharing.mask = mask;
    c.sharing.random_dims = 1;
    cells.push_back(c);
  }
  // Sharing frequency, tau = 0.01.
  CellConfig b = baseline_cell("appG", Mode::kNone);
  b.tau = Temperature::softmax(0.01);
  for (Mode mode : {Mode::kNone, Mode::kObservational}) {
    CellConfig c = b;
    c.mode = mode;
    cells.push_back(c);
  }
  for (std::size_t k : {1, 2, 5, 10}) {
    CellConfig c = b;
    c.mode = Mode::kBeliefSharing;
    c.sharing.frequency = k;
    cells.push_back(c);
  }
  return cells;
}

const std::map<std::string, std::function<Cells()>>& registry() {
  static const std::map<std::string, std::function<Cells()>> presets = {
      {"fig2", fig2},
      {"fig3a", [] { return core_modes(baseline_cell("fig3a", Mode::kNone)); }},
      {"fig3b", [] { return core_modes(baseline_cell("fig3b", Mode::kNone)); }},
      {"fig3c", fig3c},
      {"fig4", fig4},
      {"fig_inspiration", fig_inspiration},
      {"fig_imitation", fig_imitation},
      {"fig_m", fig_m},
      {"fig_spike", fig_spike},
      {"fig_T", fig_t},
      {"appA", app_a},
      {"appB", app_b},
      {"appC", app_c},
      {"appD", app_d},
      {"appE", app_e},
      {"appF", app_f},
      {"appF_er", app_f_er},
      {"appF_lattice", app_f_lattice},
      {"appG", app_g},
  };
  return presets;
}

}  // namespace

CellConfig baseline_cell(const std::string& preset, Mode mode) {
  CellConfig c;
  c.preset = preset;
  c.mode = mode;
  c.m = 50;
  c.pi_max = 1.0;
  c.alpha = 0.8;
  c.epsilon = 0.1;
  c.tau = Temperature::greedy();
  c.phi1 = c.phi2 = 0.5;
  c.phi_bs = 0.5;
  c.horizon = 1000;
  return c;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : registry()) names.push_back(name);
  return names;
}

std::vector<CellConfig> preset_cells(const std::string& name) {
  auto it = registry().find(name);
  if (it == registry().end()) throw UnknownPreset(name);
  return it->second();
}

ExperimentSpec make_preset(const std::string& name, std::size_t n_runs,
                           std::uint64_t master_seed) {
  ExperimentSpec spec;
  spec.name = name;
  spec.cells = preset_cells(name);
  spec.n_runs = n_runs;
  spec.master_seed = master_seed;
  return spec;
}

}  // namespace vicar
