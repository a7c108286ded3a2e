#include "vicar/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include "vicar/output.hpp"
#include "vicar/presets.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vicar {

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& why) {
  throw ConfigError(kExitBadConfig, key,
                    fmt::format("config key '{}': bad value '{}' ({})", key,
                                value, why));
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Splits on commas outside parentheses, so "er(100,0.02)" stays whole.
std::vector<std::string> split_values(const std::string& text) {
  std::vector<std::string> out(1);
  int depth = 0;
  for (char ch : text) {
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (ch == ',' && depth == 0) {
      out.emplace_back();
    } else {
      out.back() += ch;
    }
  }
  for (auto& v : out) v = trim(v);
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    bad_value(key, v, "expected a number");
  return x;
}

template <typename Int>
Int to_integer(const std::string& key, const std::string& v) {
  Int x = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    bad_value(key, v, "expected a non-negative integer");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "expected true or false");
}

// Wraps library parsers so their errors name the config key.
template <typename F>
auto guarded(const std::string& key, const std::string& v, F parse) {
  try {
    return parse(v);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    bad_value(key, v, e.what());
  }
}

using Setter = std::function<void(CellConfig&, const std::string&)>;

struct KeySpec {
  Setter set;
  bool in_csv;  // already distinguishes cells in the output columns
};

const std::map<std::string, KeySpec>& cell_keys() {
  static const std::map<std::string, KeySpec> keys = {
      {"mode", {[](CellConfig& c, const std::string& v) {
                  c.mode = guarded("mode", v, parse_mode);
                }, true}},
      {"topology", {[](CellConfig& c, const std::string& v) {
                      c.topology = guarded("topology", v, Topology::parse);
                    }, true}},
      {"m", {[](CellConfig& c, const std::string& v) {
               c.m = to_integer<std::size_t>("m", v);
             }, true}},
      {"pi_max", {[](CellConfig& c, const std::string& v) {
                    c.pi_max = to_double("pi_max", v);
                  }, true}},
      {"alpha", {[](CellConfig& c, const std::string& v) {
                   c.alpha = to_double("alpha", v);
                 }, true}},
      {"epsilon", {[](CellConfig& c, const std::string& v) {
                     c.epsilon = to_double("epsilon", v);
                   }, true}},
      {"tau", {[](CellConfig& c, const std::string& v) {
                 c.tau = guarded("tau", v, Temperature::parse);
               }, true}},
      {"phi", {[](CellConfig& c, const std::string& v) {
                 c.phi1 = c.phi2 = to_double("phi", v);
               }, true}},
      {"phi1", {[](CellConfig& c, const std::string& v) {
                  c.phi1 = to_double("phi1", v);
                }, true}},
      {"phi2", {[](CellConfig& c, const std::string& v) {
                  c.phi2 = to_double("phi2", v);
                }, true}},
      {"phi_ol", {[](CellConfig& c, const std::string& v) {
                    if (v == "phi") c.phi_ol.reset();
                    else c.phi_ol = to_double("phi_ol", v);
                  }, true}},
      {"phi_bs", {[](CellConfig& c, const std::string& v) {
                    c.phi_bs = to_double("phi_bs", v);
                  }, true}},
      {"sharing_mask", {[](CellConfig& c, const std::string& v) {
                          c.sharing.mask = guarded("sharing_mask", v, parse_share_mask);
                        }, true}},
      {"random_dims", {[](CellConfig& c, const std::string& v) {
                         c.sharing.random_dims = to_integer<std::size_t>("random_dims", v);
                       }, true}},
      {"sharing_freq", {[](CellConfig& c, const std::string& v) {
                          c.sharing.frequency = to_integer<std::size_t>("sharing_freq", v);
                        }, true}},
      {"blend", {[](CellConfig& c, const std::string& v) {
                   c.sharing.blend = guarded("blend", v, parse_blend_rule);
                 }, false}},
      {"T", {[](CellConfig& c, const std::string& v) {
               c.horizon = to_integer<std::size_t>("T", v);
             }, true}},
      {"full_feedback", {[](CellConfig& c, const std::string& v) {
                           c.full_feedback = to_bool("full_feedback", v);
                         }, false}},
      {"rule", {[](CellConfig& c, const std::string& v) {
                  c.rule1 = c.rule2 = guarded("rule", v, parse_update_rule);
                }, false}},
      {"rule1", {[](CellConfig& c, const std::string& v) {
                   c.rule1 = guarded("rule1", v, parse_update_rule);
                 }, false}},
      {"rule2", {[](CellConfig& c, const std::string& v) {
                   c.rule2 = guarded("rule2", v, parse_update_rule);
                 }, false}},
      {"tau_low", {[](CellConfig& c, const std::string& v) {
                     c.tau_low = to_double("tau_low", v);
                   }, false}},
      {"tau_high", {[](CellConfig& c, const std::string& v) {
                      c.tau_high = to_double("tau_high", v);
                    }, false}},
      {"threshold", {[](CellConfig& c, const std::string& v) {
                       c.threshold = to_double("threshold", v);
                     }, false}},
      {"observed_first", {[](CellConfig& c, const std::string& v) {
                            c.observed_first = to_bool("observed_first", v);
                          }, false}},
      {"scope_metrics", {[](CellConfig& c, const std::string& v) {
                           c.scope_metrics = to_bool("scope_metrics", v);
                         }, false}},
  };
  return keys;
}

int default_workers() {
  if (const char* env = std::getenv("VICAR_WORKERS")) {
    const std::string v = env;
    int n = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (ec != std::errc() || ptr != v.data() + v.size() || n < 1)
      throw ConfigError(kExitBadConfig, "VICAR_WORKERS",
                        "VICAR_WORKERS must be a positive integer, got '" + v + "'");
    return n;
  }
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace

GridConfig parse_config(std::istream& in) {
  GridConfig grid;
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(kExitBadConfig, "",
                        fmt::format("config line {}: expected key = value", line_no));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!seen.insert(key).second)
      throw ConfigError(kExitBadConfig, key,
                        fmt::format("config key '{}' given twice", key));
    if (value.empty()) bad_value(key, value, "empty");

    if (key == "name") {
      grid.name = value;
    } else if (key == "runs") {
      grid.runs = to_integer<std::size_t>(key, value);
    } else if (key == "seed") {
      grid.seed = to_integer<std::uint64_t>(key, value);
    } else if (key == "crn") {
      grid.crn = to_bool(key, value);
    } else if (cell_keys().count(key)) {
      auto values = split_values(value);
      for (const auto& v : values)
        if (v.empty()) bad_value(key, value, "empty list entry");
      axes.emplace_back(key, std::move(values));
    } else {
      throw ConfigError(kExitBadConfig, key,
                        fmt::format("unknown config key '{}'", key));
    }
  }

  CellConfig base;
  base.preset = grid.name;
  std::vector<CellConfig> cells = {base};
  for (const auto& [key, values] : axes) {
    const KeySpec& spec = cell_keys().at(key);
    std::vector<CellConfig> next;
    for (const auto& cell : cells) {
      for (const auto& v : values) {
        CellConfig c = cell;
        spec.set(c, v);
        if (!spec.in_csv && values.size() > 1)
          c.variant += (c.variant.empty() ? "" : ";") + key + "=" + v;
        next.push_back(std::move(c));
      }
    }
    cells = std::move(next);
  }
  for (auto& c : cells) {
    try {
      c.validate();
    } catch (const std::exception& e) {
      throw ConfigError(kExitBadConfig, "",
                        std::string("invalid configuration: ") + e.what());
    }
  }
  grid.cells = std::move(cells);
  return grid;
}

GridConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError(kExitIo, "--config", "cannot read config file " + path.string());
  return parse_config(in);
}

std::optional<CliOptions> parse_args(int argc, const char* const* argv,
                                     std::ostream& out) {
  CLI::App app{"Monte Carlo simulator of vicarious learning in bandit tasks"};
  std::string preset, config_path, manifest_path, format = "csv";
  std::size_t runs = 0;
  std::uint64_t seed = 0;
  int workers = 0;
  bool crn = false, full_scale = false, list = false;
  std::string out_dir = "results";

  auto* o_preset = app.add_option("--preset", preset, "named experiment");
  auto* o_config = app.add_option("--config", config_path, "key = value grid file");
  auto* o_manifest = app.add_option("--manifest", manifest_path,
                                    "replay the experiment recorded in a manifest.json");
  auto* o_runs = app.add_option("--runs", runs, "Monte Carlo runs per cell (default 10000)");
  auto* o_seed = app.add_option("--seed", seed, "master seed (default 42)");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "csv, or json to also write metrics.json")
      ->check(CLI::IsMember({"csv", "json"}));
  auto* o_workers = app.add_option("--workers", workers,
                                   "parallel workers (default: $VICAR_WORKERS or all cores)");
  auto* o_crn = app.add_flag("--crn", crn, "common random numbers across cells");
  auto* o_full = app.add_flag("--full-scale", full_scale, "use 100000 runs per cell");
  app.add_flag("--list-presets", list, "print preset names and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(kExitUsage, "", e.what());
  }

  if (list) {
    for (const auto& name : preset_names()) out << name << '\n';
    return std::nullopt;
  }

  const int sources = static_cast<int>(o_preset->count() > 0) +
                      static_cast<int>(o_config->count() > 0) +
                      static_cast<int>(o_manifest->count() > 0);
  if (sources > 1)
    throw ConfigError(kExitConflict, "--preset",
                      "--preset, --config and --manifest are mutually exclusive");
  if (sources == 0)
    throw ConfigError(kExitUsage, "", "one of --preset, --config or --manifest is required");
  if (full_scale && o_runs->count())
    throw ConfigError(kExitConflict, "--full-scale",
                      "--full-scale conflicts with --runs");
  if (o_manifest->count() &&
      (o_runs->count() || o_seed->count() || o_crn->count() || o_full->count()))
    throw ConfigError(kExitConflict, "--manifest",
                      "--manifest replays a recorded experiment; drop --runs, "
                      "--seed, --crn and --full-scale");
  if (o_runs->count() && runs < 1)
    throw ConfigError(kExitBadConfig, "--runs", "--runs must be >= 1");
  if (o_workers->count() && workers < 1)
    throw ConfigError(kExitBadConfig, "--workers", "--workers must be >= 1");

  CliOptions options;
  options.out_dir = out_dir;
  options.json = format == "json";
  options.workers = o_workers->count() ? workers : default_workers();

  const std::size_t default_runs = full_scale ? kFullScaleRuns : 10'000;
  ExperimentSpec& spec = options.spec;
  if (o_preset->count()) {
    try {
      spec = make_preset(preset, o_runs->count() ? runs : default_runs,
                         o_seed->count() ? seed : 42);
    } catch (const UnknownPreset& e) {
      throw ConfigError(kExitUnknownPreset, "--preset", e.what());
    }
    spec.common_random_numbers = crn;
  } else if (o_config->count()) {
    GridConfig grid = parse_config_file(config_path);
    spec.name = grid.name;
    spec.cells = std::move(grid.cells);
    spec.n_runs = o_runs->count() ? runs : grid.runs.value_or(default_runs);
    spec.master_seed = o_seed->count() ? seed : grid.seed.value_or(42);
    spec.common_random_numbers = crn || grid.crn;
  } else {
    std::ifstream in(manifest_path);
    if (!in)
      throw ConfigError(kExitIo, "--manifest", "cannot read " + manifest_path);
    try {
      spec = spec_from_manifest(nlohmann::json::parse(in));
    } catch (const std::exception& e) {
      throw ConfigError(kExitBadConfig, "--manifest",
                        std::string("malformed manifest: ") + e.what());
    }
  }
  if (spec.n_runs < 1)
    throw ConfigError(kExitBadConfig, "runs", "runs must be >= 1");
  return options;
}

}  // namespace vicar
