#pragma once

#include "tpump/dynamics.hpp"
#include "tpump/hilbert.hpp"
#include "tpump/spectra.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tpump {

enum class Experiment { spectrum, winding, pump, qpt };

std::string to_string(Experiment e);
/// Throws ConfigError for an unknown name.
Experiment parse_experiment(const std::string& name);

/// Inclusive, evenly spaced grid. steps = 1 yields {min}.
struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int steps = 0;

  std::vector<double> values() const;
};

struct RunConfig {
  Experiment experiment = Experiment::spectrum;
  ModelParams model;
  DriveCycle cycle;
  GridSpec v_grid;
  GridSpec lambda_grid;

  // spectrum
  double midgap_tol = kDefaultMidgapTol;
  std::vector<double> state_v;
  // winding
  std::vector<double> profile_v;
  std::pair<double, double> window{-10.0, 10.0};
  // pump
  int cycles = 10;
  int steps_per_cycle = kDefaultStepsPerCycle;
  int samples_per_cycle = kDefaultSamplesPerCycle;
  double adiabatic_floor = 0.99;
  std::vector<double> v_offsets;
  std::vector<double> lambdas;

  std::filesystem::path output_dir = ".";
  int jobs = 1;

};

enum class FieldKind { number, integer, number_list, text };

/// One configurable field. `path` is the dotted JSON path (underscores);
/// the matching flag replaces '_' with '-'.
struct FieldSpec {
  std::string path;
  FieldKind kind;
  std::string help;
};

const std::vector<FieldSpec>& config_fields();
/// Fields that apply to one experiment (the ones exposed as flags).
std::vector<FieldSpec> config_fields(Experiment e);
std::string flag_name(const FieldSpec& f);

/// Fully populated default document for an experiment.
nlohmann::json default_config_json(Experiment e);

/// defaults <- file document <- overrides (dotted path -> raw flag text),
/// then validated. Unknown keys and bad values raise ConfigError naming the field.
RunConfig resolve_config(Experiment e, const nlohmann::json& file_doc,
                         const std::map<std::string, std::string>& overrides);

nlohmann::json load_config_file(const std::filesystem::path& path);

/// Complete resolved configuration, as stored in every sidecar.
nlohmann::json to_json(const RunConfig& cfg);

} // namespace tpump
