#include "tpump/config.hpp"

#include "tpump/errors.hpp"
#include "tpump/manybody.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tpump {

using nlohmann::json;

namespace {

struct FieldEntry {
  FieldSpec spec;
  std::vector<Experiment> used_by;
};

const std::vector<FieldEntry>& field_table() {
  using E = Experiment;
  static const std::vector<FieldEntry> table = {
      {{"model.S", FieldKind::number, "spin magnitude S (2S integer >= 2)"},
       {E::spectrum, E::winding, E::pump, E::qpt}},
      {{"model.w", FieldKind::number, "exchange energy w"}, {E::spectrum, E::winding, E::qpt}},
      {{"model.v", FieldKind::number, "spin-flip energy v"}, {E::qpt}},
      {{"model.delta", FieldKind::number, "sigma_z offset"}, {E::qpt}},
      {{"cycle.v0", FieldKind::number, "peak spin-flip energy"}, {E::pump}},
      {{"cycle.w0", FieldKind::number, "peak exchange energy"}, {E::pump}},
      {{"cycle.delta0", FieldKind::number, "peak sigma_z offset"}, {E::pump}},
      {{"cycle.period_T", FieldKind::number, "drive period"}, {E::pump}},
      {{"cycle.phase_offset", FieldKind::number, "start phase, in periods"}, {E::pump}},
      {{"v_grid.min", FieldKind::number, "first v"}, {E::spectrum, E::winding}},
      {{"v_grid.max", FieldKind::number, "last v"}, {E::spectrum, E::winding}},
      {{"v_grid.steps", FieldKind::integer, "number of v points"}, {E::spectrum, E::winding}},
      {{"lambda_grid.min", FieldKind::number, "first Lambda (default 2 Lambda_c)"}, {E::qpt}},
      {{"lambda_grid.max", FieldKind::number, "last Lambda"}, {E::qpt}},
      {{"lambda_grid.steps", FieldKind::integer, "number of Lambda points"}, {E::qpt}},
      {{"spectrum.midgap_tol", FieldKind::number, "|E| below which a state is mid-gap"},
       {E::spectrum}},
      {{"spectrum.state_v", FieldKind::number_list, "v values for states.csv"}, {E::spectrum}},
      {{"winding.profile_v", FieldKind::number_list, "v values for profile files"},
       {E::winding}},
      {{"winding.window_min", FieldKind::number, "bulk window lower n"}, {E::winding}},
      {{"winding.window_max", FieldKind::number, "bulk window upper n"}, {E::winding}},
      {{"pump.cycles", FieldKind::integer, "number of drive cycles"}, {E::pump}},
      {{"pump.steps_per_cycle", FieldKind::integer, "time steps per cycle"}, {E::pump}},
      {{"pump.samples_per_cycle", FieldKind::integer, "CSV rows per cycle"}, {E::pump}},
      {{"pump.adiabatic_floor", FieldKind::number, "lower-band population warning floor"},
       {E::pump}},
      {{"pump.v_offsets", FieldKind::number_list, "circuits, as v offsets in units of v0"},
       {E::pump}},
      {{"pump.lambdas", FieldKind::number_list, "interaction strengths"}, {E::pump}},
  };
  return table;
}

bool applies(const FieldEntry& f, Experiment e) {
  return std::find(f.used_by.begin(), f.used_by.end(), e) != f.used_by.end();
}

json::json_pointer pointer(const std::string& dotted) {
  std::string p = "/" + dotted;
  std::replace(p.begin(), p.end(), '.', '/');
  return json::json_pointer(p);
}

const FieldEntry* find_field(const std::string& path) {
  for (const auto& f : field_table()) {
    if (f.spec.path == path) {
      return &f;
    }
  }
  return nullptr;
}

double parse_number(const std::string& field, const std::string& text) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(field, "'" + text + "' is not a number");
  }
  if (used != text.size()) {
    throw ConfigError(field, "'" + text + "' is not a number");
  }
  return x;
}

json parse_flag_value(const FieldSpec& f, const std::string& text) {
  switch (f.kind) {
  case FieldKind::number:
    return parse_number(f.path, text);
  case FieldKind::integer: {
    const double x = parse_number(f.path, text);
    if (x != std::floor(x)) {
      throw ConfigError(f.path, "'" + text + "' is not an integer");
    }
    return static_cast<long long>(x);
  }
  case FieldKind::number_list: {
    json list = json::array();
    if (text.empty()) {
      return list;
    }
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
      list.push_back(parse_number(f.path, item));
    }
    return list;
  }
  case FieldKind::text:
    return text;
  }
  return nullptr;
}

void check_known_keys(const json& doc, const json& schema, const std::string& prefix) {
  for (const auto& [key, value] : doc.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!schema.contains(key)) {
      throw ConfigError(path, "unknown field");
    }
    if (schema[key].is_object()) {
      if (!value.is_object()) {
        throw ConfigError(path, "expected an object");
      }
      check_known_keys(value, schema[key], path);
    }
  }
}

json full_schema() {
  json all = json::object();
  for (Experiment e : {Experiment::spectrum, Experiment::winding, Experiment::pump,
                       Experiment::qpt}) {
    all.merge_patch(default_config_json(e));
  }
  return all;
}

double get_number(const json& doc, const std::string& path) {
  const json& v = doc.at(pointer(path));
  if (!v.is_number()) {
    throw ConfigError(path, "expected a number");
  }
  const double x = v.get<double>();
  if (!std::isfinite(x)) {
    throw ConfigError(path, "must be finite");
  }
  return x;
}

int get_int(const json& doc, const std::string& path) {
  const json& v = doc.at(pointer(path));
  if (!v.is_number() || v.get<double>() != std::floor(v.get<double>())) {
    throw ConfigError(path, "expected an integer");
  }
  return v.get<int>();
}

std::vector<double> get_list(const json& doc, const std::string& path) {
  const json& v = doc.at(pointer(path));
  if (!v.is_array()) {
    throw ConfigError(path, "expected a list of numbers");
  }
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number() || !std::isfinite(x.get<double>())) {
      throw ConfigError(path, "expected a list of finite numbers");
    }
    out.push_back(x.get<double>());
  }
  return out;
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) {
    throw ConfigError(field, message);
  }
}

GridSpec read_grid(const json& doc, const std::string& name) {
  GridSpec g{get_number(doc, name + ".min"), get_number(doc, name + ".max"),
             get_int(doc, name + ".steps")};
  require(g.steps >= 1, name + ".steps", "grid is empty (steps must be >= 1)");
  require(g.steps == 1 || g.min < g.max, name + ".max", "must exceed min");
  return g;
}

int read_two_s(const json& doc) {
  const double s = get_number(doc, "model.S");
  const double two_s = 2.0 * s;
  require(std::abs(two_s - std::round(two_s)) < 1e-9, "model.S", "2S must be an integer");
  require(std::round(two_s) >= 2.0, "model.S", "2S must be at least 2");
  require(two_s < 1e5, "model.S", "too large");
  return static_cast<int>(std::round(two_s));
}

} // namespace

std::string to_string(Experiment e) {
  switch (e) {
  case Experiment::spectrum:
    return "spectrum";
  case Experiment::winding:
    return "winding";
  case Experiment::pump:
    return "pump";
  case Experiment::qpt:
    return "qpt";
  }
  return "?";
}

Experiment parse_experiment(const std::string& name) {
  for (Experiment e : {Experiment::spectrum, Experiment::winding, Experiment::pump,
                       Experiment::qpt}) {
    if (to_string(e) == name) {
      return e;
    }
  }
  throw ConfigError("experiment", "unknown experiment '" + name + "'");
}

std::vector<double> GridSpec::values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(steps, 0)));
  for (int i = 0; i < steps; ++i) {
    out.push_back(steps == 1 ? min : min + (max - min) * i / (steps - 1));
  }
  if (steps > 1) {
    out.back() = max;
  }
  return out;
}

const std::vector<FieldSpec>& config_fields() {
  static const std::vector<FieldSpec> fields = [] {
    std::vector<FieldSpec> out;
    for (const auto& f : field_table()) {
      out.push_back(f.spec);
    }
    return out;
  }();
  return fields;
}

std::vector<FieldSpec> config_fields(Experiment e) {
  std::vector<FieldSpec> out;
  for (const auto& f : field_table()) {
    if (applies(f, e)) {
      out.push_back(f.spec);
    }
  }
  return out;
}

std::string flag_name(const FieldSpec& f) {
  std::string name = f.path;
  std::replace(name.begin(), name.end(), '_', '-');
  return name;
}

json default_config_json(Experiment e) {
  json doc = {{"experiment", to_string(e)}, {"output_dir", "."}, {"jobs", 1}};
  switch (e) {
  case Experiment::spectrum:
    doc["model"] = {{"S", 5}, {"w", 1.0}};
    doc["v_grid"] = {{"min", 0.0}, {"max", 2.0}, {"steps", 201}};
    doc["spectrum"] = {{"midgap_tol", kDefaultMidgapTol}, {"state_v", {0.4, 1.6}}};
    break;
  case Experiment::winding:
    doc["model"] = {{"S", 50}, {"w", 1.0}};
    doc["v_grid"] = {{"min", 0.5}, {"max", 1.5}, {"steps", 41}};
    doc["winding"] = {{"profile_v", {0.5, 1.5}}, {"window_min", -10.0}, {"window_max", 10.0}};
    break;
  case Experiment::pump: {
    const DriveCycle c;
    doc["model"] = {{"S", 50}};
    doc["cycle"] = {{"v0", c.v0},
                    {"w0", c.w0},
                    {"delta0", c.delta0},
                    {"period_T", c.period_T},
                    {"phase_offset", c.phase_offset}};
    doc["pump"] = {{"cycles", 10},
                   {"steps_per_cycle", kDefaultStepsPerCycle},
                   {"samples_per_cycle", kDefaultSamplesPerCycle},
                   {"adiabatic_floor", 0.99},
                   {"v_offsets", {0.0, kNonEnclosingOffset}},
                   {"lambdas", {0.0}}};
    break;
  }
  case Experiment::qpt:
    doc["model"] = {{"S", 200}, {"w", 1.0}, {"v", 1.0}, {"delta", 4.0}};
    doc["lambda_grid"] = {{"min", nullptr}, {"max", 0.0}, {"steps", 41}};
    break;
  }
  return doc;
}

json load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("config", "cannot read " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", path.string() + ": " + e.what());
  }
}

RunConfig resolve_config(Experiment e, const json& file_doc,
                         const std::map<std::string, std::string>& overrides) {
  if (!file_doc.is_null() && !file_doc.is_object()) {
    throw ConfigError("config", "top level must be a JSON object");
  }
  json doc = default_config_json(e);
  if (file_doc.is_object()) {
    check_known_keys(file_doc, full_schema(), "");
    if (file_doc.contains("experiment")) {
      require(file_doc["experiment"].is_string() &&
                  file_doc["experiment"].get<std::string>() == to_string(e),
              "experiment", "config is for a different experiment");
    }
    // Sections that belong to other experiments are accepted and ignored.
    for (const auto& [key, value] : file_doc.items()) {
      if (!doc.contains(key)) {
        continue;
      }
      if (value.is_object()) {
        for (const auto& [sub, x] : value.items()) {
          if (doc[key].contains(sub)) {
            doc[key][sub] = x;
          }
        }
      } else {
        doc[key] = value;
      }
    }
  }
  for (const auto& [path, text] : overrides) {
    if (path == "output_dir") {
      doc["output_dir"] = text;
      continue;
    }
    if (path == "jobs") {
      doc["jobs"] = parse_flag_value({"jobs", FieldKind::integer, ""}, text);
      continue;
    }
    const FieldEntry* f = find_field(path);
    if (f == nullptr || !applies(*f, e)) {
      throw ConfigError(path, "not a field of the " + to_string(e) + " experiment");
    }
    doc[pointer(path)] = parse_flag_value(f->spec, text);
  }

  RunConfig cfg;
  cfg.experiment = e;
  cfg.model.two_s = read_two_s(doc);
  if (doc["model"].contains("w")) {
    cfg.model.w = get_number(doc, "model.w");
    require(cfg.model.w > 0.0, "model.w", "must be positive");
  }
  if (doc["model"].contains("v")) {
    cfg.model.v = get_number(doc, "model.v");
    require(cfg.model.v >= 0.0, "model.v", "must be non-negative");
  }
  if (doc["model"].contains("delta")) {
    cfg.model.delta = get_number(doc, "model.delta");
  }

  require(doc["output_dir"].is_string() && !doc["output_dir"].get<std::string>().empty(),
          "output_dir", "expected a non-empty path");
  cfg.output_dir = doc["output_dir"].get<std::string>();
  cfg.jobs = get_int(doc, "jobs");
  require(cfg.jobs >= 1, "jobs", "must be at least 1");

  switch (e) {
  case Experiment::spectrum: {
    cfg.v_grid = read_grid(doc, "v_grid");
    require(cfg.v_grid.min >= 0.0, "v_grid.min", "v must be non-negative");
    cfg.midgap_tol = get_number(doc, "spectrum.midgap_tol");
    require(cfg.midgap_tol > 0.0, "spectrum.midgap_tol", "must be positive");
    cfg.state_v = get_list(doc, "spectrum.state_v");
    for (double v : cfg.state_v) {
      require(v >= 0.0, "spectrum.state_v", "v must be non-negative");
    }
    break;
  }
  case Experiment::winding: {
    cfg.v_grid = read_grid(doc, "v_grid");
    require(cfg.v_grid.min >= 0.0, "v_grid.min", "v must be non-negative");
    cfg.profile_v = get_list(doc, "winding.profile_v");
    for (double v : cfg.profile_v) {
      require(v >= 0.0, "winding.profile_v", "v must be non-negative");
    }
    cfg.window = {get_number(doc, "winding.window_min"), get_number(doc, "winding.window_max")};
    const double s = cfg.model.spin();
    require(cfg.window.first >= -s, "winding.window_min", "must be >= -S");
    require(cfg.window.second <= s, "winding.window_max", "must be <= S");
    require(cfg.window.first <= cfg.window.second, "winding.window_max",
            "must not be below window_min");
    break;
  }
  case Experiment::pump: {
    cfg.cycle.v0 = get_number(doc, "cycle.v0");
    cfg.cycle.w0 = get_number(doc, "cycle.w0");
    cfg.cycle.delta0 = get_number(doc, "cycle.delta0");
    cfg.cycle.period_T = get_number(doc, "cycle.period_T");
    cfg.cycle.phase_offset = get_number(doc, "cycle.phase_offset");
    require(cfg.cycle.v0 >= 0.0, "cycle.v0", "must be non-negative");
    require(cfg.cycle.w0 >= 0.0, "cycle.w0", "must be non-negative");
    require(cfg.cycle.period_T > 0.0, "cycle.period_T", "must be positive");
    cfg.cycles = get_int(doc, "pump.cycles");
    require(cfg.cycles >= 1, "pump.cycles", "must be at least 1");
    cfg.steps_per_cycle = get_int(doc, "pump.steps_per_cycle");
    require(cfg.steps_per_cycle >= 1000, "pump.steps_per_cycle", "must be at least 1000");
    cfg.samples_per_cycle = get_int(doc, "pump.samples_per_cycle");
    require(cfg.samples_per_cycle >= 1 && cfg.samples_per_cycle <= cfg.steps_per_cycle,
            "pump.samples_per_cycle", "must lie in [1, steps_per_cycle]");
    cfg.adiabatic_floor = get_number(doc, "pump.adiabatic_floor");
    require(cfg.adiabatic_floor >= 0.0 && cfg.adiabatic_floor <= 1.0, "pump.adiabatic_floor",
            "must lie in [0, 1]");
    cfg.v_offsets = get_list(doc, "pump.v_offsets");
    require(!cfg.v_offsets.empty(), "pump.v_offsets", "need at least one circuit");
    for (double x : cfg.v_offsets) {
      require(x >= 0.0, "pump.v_offsets", "offsets must be non-negative");
    }
    cfg.lambdas = get_list(doc, "pump.lambdas");
    require(!cfg.lambdas.empty(), "pump.lambdas", "need at least one value");
    break;
  }
  case Experiment::qpt: {
    json& g = doc["lambda_grid"];
    if (g["min"].is_null()) {
      g["min"] = 2.0 * lambda_crit(cfg.model);
    }
    cfg.lambda_grid = read_grid(doc, "lambda_grid");
    break;
  }
  }
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json doc = default_config_json(cfg.experiment);
  doc["output_dir"] = cfg.output_dir.string();
  doc["jobs"] = cfg.jobs;
  doc["model"]["S"] = cfg.model.spin();
  auto grid = [](const GridSpec& g) {
    return json{{"min", g.min}, {"max", g.max}, {"steps", g.steps}};
  };
  switch (cfg.experiment) {
  case Experiment::spectrum:
    doc["model"]["w"] = cfg.model.w;
    doc["v_grid"] = grid(cfg.v_grid);
    doc["spectrum"] = {{"midgap_tol", cfg.midgap_tol}, {"state_v", cfg.state_v}};
    break;
  case Experiment::winding:
    doc["model"]["w"] = cfg.model.w;
    doc["v_grid"] = grid(cfg.v_grid);
    doc["winding"] = {{"profile_v", cfg.profile_v},
                      {"window_min", cfg.window.first},
                      {"window_max", cfg.window.second}};
    break;
  case Experiment::pump:
    doc["cycle"] = {{"v0", cfg.cycle.v0},
                    {"w0", cfg.cycle.w0},
                    {"delta0", cfg.cycle.delta0},
                    {"period_T", cfg.cycle.period_T},
                    {"phase_offset", cfg.cycle.phase_offset}};
    doc["pump"] = {{"cycles", cfg.cycles},
                   {"steps_per_cycle", cfg.steps_per_cycle},
                   {"samples_per_cycle", cfg.samples_per_cycle},
                   {"adiabatic_floor", cfg.adiabatic_floor},
                   {"v_offsets", cfg.v_offsets},
                   {"lambdas", cfg.lambdas}};
    break;
  case Experiment::qpt:
    doc["model"]["w"] = cfg.model.w;
    doc["model"]["v"] = cfg.model.v;
    doc["model"]["delta"] = cfg.model.delta;
    doc["lambda_grid"] = grid(cfg.lambda_grid);
    break;
  }
  return doc;
}

} // namespace tpump
