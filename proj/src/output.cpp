#include "vicar/output.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <tuple>

#include <fmt/core.h>

namespace vicar {

namespace {

constexpr std::size_t kColumnCount = std::size(kCsvColumns);

std::string schema_line() {
  return fmt::format("# vicar-metrics schema {}", kSchemaVersion);
}

std::string header_line() {
  std::string line;
  for (std::size_t i = 0; i < kColumnCount; ++i) {
    if (i) line += ',';
    line += kCsvColumns[i];
  }
  return line;
}

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        fields.back() += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.emplace_back();
    } else {
      fields.back() += ch;
    }
  }
  if (quoted) throw std::runtime_error("unterminated quote in CSV record");
  return fields;
}

double to_double(const std::string& s, const char* column) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error(fmt::format("bad number '{}' in column {}", s, column));
  return x;
}

std::size_t to_size(const std::string& s, const char* column) {
  std::size_t x = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw std::runtime_error(fmt::format("bad integer '{}' in column {}", s, column));
  return x;
}

auto cell_columns(const OutputRow& r) {
  return std::tie(r.preset, r.mode, r.topology, r.m, r.pi_max, r.alpha,
                  r.epsilon, r.tau, r.phi1, r.phi2, r.phi_ol, r.phi_bs,
                  r.sharing_mask, r.sharing_freq, r.horizon);
}

OutputRow cell_row(const CellConfig& c) {
  OutputRow r;
  r.preset = preset_label(c);
  r.mode = to_string(c.mode);
  r.topology = c.topology.to_string();
  r.m = c.m;
  r.pi_max = c.pi_max;
  r.alpha = c.alpha;
  r.epsilon = c.epsilon;
  r.tau = c.tau.to_string();
  r.phi1 = c.phi1;
  r.phi2 = c.phi2;
  r.phi_ol = c.phi_ol ? format_number(*c.phi_ol) : std::string("phi");
  r.phi_bs = c.phi_bs;
  r.sharing_mask = mask_label(c.sharing);
  r.sharing_freq = c.sharing.frequency;
  r.horizon = c.horizon;
  return r;
}

void check_stream(const std::ostream& out, const std::filesystem::path& path) {
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace

std::string format_number(double x) { return fmt::format("{}", x); }

std::string preset_label(const CellConfig& cell) {
  return cell.variant.empty() ? cell.preset : cell.preset + ":" + cell.variant;
}

std::string mask_label(const SharingPolicy& sharing) {
  if (sharing.mask == ShareMask::kRandomK)
    return fmt::format("random({})", sharing.random_dims);
  return to_string(sharing.mask);
}

std::vector<OutputRow> make_rows(const std::vector<CellResult>& results) {
  std::vector<OutputRow> rows;
  std::set<std::string> seen;
  for (const auto& result : results) {
    if (!result.ok()) continue;
    const OutputRow base = cell_row(result.cell);
    const std::string key = fmt::format(
        "{}|{}|{}|{}|{}|{}|{}|{}|{}|{}|{}|{}|{}|{}|{}", base.preset, base.mode,
        base.topology, base.m, base.pi_max, base.alpha, base.epsilon, base.tau,
        base.phi1, base.phi2, base.phi_ol, base.phi_bs, base.sharing_mask,
        base.sharing_freq, base.horizon);
    if (!seen.insert(key).second)
      throw std::invalid_argument(
          fmt::format("two cells share the output columns of preset '{}' mode "
                      "{}; give them distinct variants",
                      base.preset, base.mode));

    const MetricTable& table = *result.table;
    for (std::size_t t = 0; t < table.horizon; ++t) {
      for (std::string_view name : MetricTable::kSeriesNames) {
        const Series& s = table.series(name);
        OutputRow r = base;
        r.period = t + 1;
        r.metric_name = std::string(name);
        r.value = s.value[t];
        r.std_err = s.std_err[t];
        r.n_runs = s.n_runs;
        rows.push_back(std::move(r));
      }
    }
    if (result.cell.scope_metrics) {
      for (auto [name, stat] : {std::pair{"agent_scope", table.agent_scope},
                                std::pair{"system_scope", table.system_scope}}) {
        OutputRow r = base;
        r.period = table.horizon;
        r.metric_name = name;
        r.value = stat.value;
        r.std_err = stat.std_err;
        r.n_runs = stat.n_runs;
        rows.push_back(std::move(r));
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const OutputRow& a, const OutputRow& b) {
                     return std::tuple_cat(cell_columns(a),
                                           std::tie(a.period, a.metric_name)) <
                            std::tuple_cat(cell_columns(b),
                                           std::tie(b.period, b.metric_name));
                   });
  return rows;
}

void write_csv(std::ostream& out, const std::vector<OutputRow>& rows) {
  out << schema_line() << '\n' << header_line() << '\n';
  for (const auto& r : rows) {
    out << quote(r.preset) << ',' << quote(r.mode) << ',' << quote(r.topology)
        << ',' << r.m << ',' << format_number(r.pi_max) << ','
        << format_number(r.alpha) << ',' << format_number(r.epsilon) << ','
        << quote(r.tau) << ',' << format_number(r.phi1) << ','
        << format_number(r.phi2) << ',' << quote(r.phi_ol) << ','
        << format_number(r.phi_bs) << ',' << quote(r.sharing_mask) << ','
        << r.sharing_freq << ',' << r.horizon << ',' << r.period << ','
        << quote(r.metric_name) << ',' << format_number(r.value) << ','
        << format_number(r.std_err) << ',' << r.n_runs << '\n';
  }
}

std::vector<OutputRow> read_csv(std::istream& in) {
  std::string line;
  bool have_header = false;
  std::vector<OutputRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      if (line.empty() || line[0] == '#') continue;
      if (line != header_line())
        throw std::runtime_error("unexpected CSV header: " + line);
      have_header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_record(line);
    if (f.size() != kColumnCount)
      throw std::runtime_error(fmt::format("expected {} fields, got {}",
                                           kColumnCount, f.size()));
    OutputRow r;
    r.preset = f[0];
    r.mode = f[1];
    r.topology = f[2];
    r.m = to_size(f[3], "m");
    r.pi_max = to_double(f[4], "pi_max");
    r.alpha = to_double(f[5], "alpha");
    r.epsilon = to_double(f[6], "epsilon");
    r.tau = f[7];
    r.phi1 = to_double(f[8], "phi1");
    r.phi2 = to_double(f[9], "phi2");
    r.phi_ol = f[10];
    r.phi_bs = to_double(f[11], "phi_bs");
    r.sharing_mask = f[12];
    r.sharing_freq = to_size(f[13], "sharing_freq");
    r.horizon = to_size(f[14], "T");
    r.period = to_size(f[15], "period");
    r.metric_name = f[16];
    r.value = to_double(f[17], "value");
    r.std_err = to_double(f[18], "std_err");
    r.n_runs = to_size(f[19], "n_runs");
    rows.push_back(std::move(r));
  }
  if (!have_header) throw std::runtime_error("CSV has no header row");
  return rows;
}

nlohmann::json rows_to_json(const std::vector<OutputRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rows) {
    out.push_back({{"preset", r.preset},
                   {"mode", r.mode},
                   {"topology", r.topology},
                   {"m", r.m},
                   {"pi_max", r.pi_max},
                   {"alpha", r.alpha},
                   {"epsilon", r.epsilon},
                   {"tau", r.tau},
                   {"phi1", r.phi1},
                   {"phi2", r.phi2},
                   {"phi_ol", r.phi_ol},
                   {"phi_bs", r.phi_bs},
                   {"sharing_mask", r.sharing_mask},
                   {"sharing_freq", r.sharing_freq},
                   {"T", r.horizon},
                   {"period", r.period},
                   {"metric_name", r.metric_name},
                   {"value", r.value},
                   {"std_err", r.std_err},
                   {"n_runs", r.n_runs}});
  }
  return out;
}

nlohmann::json cell_to_json(const CellConfig& c) {
  nlohmann::json j = {
      {"preset", c.preset},
      {"variant", c.variant},
      {"mode", to_string(c.mode)},
      {"topology", c.topology.to_string()},
      {"m", c.m},
      {"pi_max", c.pi_max},
      {"alpha", c.alpha},
      {"epsilon", c.epsilon},
      {"tau", c.tau.to_string()},
      {"phi1", c.phi1},
      {"phi2", c.phi2},
      {"phi_ol", nullptr},
      {"phi_bs", c.phi_bs},
      {"sharing",
       {{"frequency", c.sharing.frequency},
        {"mask", to_string(c.sharing.mask)},
        {"random_dims", c.sharing.random_dims},
        {"blend", to_string(c.sharing.blend)}}},
      {"T", c.horizon},
      {"full_feedback", c.full_feedback},
      {"rule1", to_string(c.rule1)},
      {"rule2", to_string(c.rule2)},
      {"tau_low", c.tau_low},
      {"tau_high", c.tau_high},
      {"threshold", c.threshold},
      {"observed_first", c.observed_first},
      {"scope_metrics", c.scope_metrics},
  };
  if (c.phi_ol) j["phi_ol"] = *c.phi_ol;
  return j;
}

CellConfig cell_from_json(const nlohmann::json& j) {
  CellConfig c;
  c.preset = j.at("preset").get<std::string>();
  c.variant = j.at("variant").get<std::string>();
  c.mode = parse_mode(j.at("mode").get<std::string>());
  c.topology = Topology::parse(j.at("topology").get<std::string>());
  c.m = j.at("m").get<std::size_t>();
  c.pi_max = j.at("pi_max").get<double>();
  c.alpha = j.at("alpha").get<double>();
  c.epsilon = j.at("epsilon").get<double>();
  c.tau = Temperature::parse(j.at("tau").get<std::string>());
  c.phi1 = j.at("phi1").get<double>();
  c.phi2 = j.at("phi2").get<double>();
  if (!j.at("phi_ol").is_null()) c.phi_ol = j.at("phi_ol").get<double>();
  c.phi_bs = j.at("phi_bs").get<double>();
  const auto& s = j.at("sharing");
  c.sharing.frequency = s.at("frequency").get<std::size_t>();
  c.sharing.mask = parse_share_mask(s.at("mask").get<std::string>());
  c.sharing.random_dims = s.at("random_dims").get<std::size_t>();
  c.sharing.blend = parse_blend_rule(s.at("blend").get<std::string>());
  c.horizon = j.at("T").get<std::size_t>();
  c.full_feedback = j.at("full_feedback").get<bool>();
  c.rule1 = parse_update_rule(j.at("rule1").get<std::string>());
  c.rule2 = parse_update_rule(j.at("rule2").get<std::string>());
  c.tau_low = j.at("tau_low").get<double>();
  c.tau_high = j.at("tau_high").get<double>();
  c.threshold = j.at("threshold").get<double>();
  c.observed_first = j.at("observed_first").get<bool>();
  c.scope_metrics = j.at("scope_metrics").get<bool>();
  return c;
}

nlohmann::json make_manifest(const ExperimentSpec& spec, int workers,
                             double wall_seconds,
                             const std::vector<CellResult>& results) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : spec.cells) cells.push_back(cell_to_json(c));
  nlohmann::json failures = nlohmann::json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok())
      failures.push_back({{"cell", i}, {"error", results[i].error}});
  }
  return {{"artifact", "vicar"},
          {"version", kArtifactVersion},
          {"schema", kSchemaVersion},
          {"name", spec.name},
          {"master_seed", spec.master_seed},
          {"n_runs", spec.n_runs},
          {"common_random_numbers", spec.common_random_numbers},
          {"workers", workers},
          {"wall_seconds", wall_seconds},
          {"cells", cells},
          {"failed_cells", failures}};
}

ExperimentSpec spec_from_manifest(const nlohmann::json& manifest) {
  ExperimentSpec spec;
  spec.name = manifest.at("name").get<std::string>();
  spec.master_seed = manifest.at("master_seed").get<std::uint64_t>();
  spec.n_runs = manifest.at("n_runs").get<std::size_t>();
  spec.common_random_numbers = manifest.at("common_random_numbers").get<bool>();
  for (const auto& c : manifest.at("cells")) spec.cells.push_back(cell_from_json(c));
  return spec;
}

void write_outputs(const std::filesystem::path& dir,
                   const std::vector<CellResult>& results,
                   const ExperimentSpec& spec, bool with_json, int workers,
                   double wall_seconds) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  const auto rows = make_rows(results);
  auto open = [](const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
  };

  const auto csv_path = dir / "metrics.csv";
  {
    auto out = open(csv_path);
    write_csv(out, rows);
    out.flush();
    check_stream(out, csv_path);
  }
  if (with_json) {
    const auto json_path = dir / "metrics.json";
    auto out = open(json_path);
    out << rows_to_json(rows).dump(1) << '\n';
    out.flush();
    check_stream(out, json_path);
  }
  const auto manifest_path = dir / "manifest.json";
  auto out = open(manifest_path);
  out << make_manifest(spec, workers, wall_seconds, results).dump(2) << '\n';
  out.flush();
  check_stream(out, manifest_path);
}

}  // namespace vicar
