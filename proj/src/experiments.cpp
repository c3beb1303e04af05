#include "tpump/experiments.hpp"

#include "tpump/dynamics.hpp"
#include "tpump/io.hpp"
#include "tpump/manybody.hpp"
#include "tpump/parallel.hpp"
#include "tpump/spectra.hpp"
#include "tpump/topology.hpp"

#include <stdexcept>

namespace tpump {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path prepare_dir(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory " + cfg.output_dir.string() +
                             ": " + ec.message());
  }
  return cfg.output_dir;
}

json sidecar(const RunConfig& cfg, const fs::path& csv, std::size_t rows) {
  return json{{"artifact", "tpump"},
              {"version", kArtifactVersion},
              {"experiment", to_string(cfg.experiment)},
              {"file", csv.filename().string()},
              {"rows", rows},
              {"config", to_json(cfg)}};
}

void finish(RunOutput& out, const fs::path& csv, const json& meta) {
  const fs::path side = sidecar_path(csv);
  write_json(side, meta);
  out.files.push_back(csv);
  out.files.push_back(side);
}

json optional_json(const std::optional<double>& x) {
  return x ? json(*x) : json(nullptr);
}

std::vector<std::string> header(std::initializer_list<const char*> names) {
  return {names.begin(), names.end()};
}

} // namespace

RunOutput run_spectrum(const RunConfig& cfg) {
  const fs::path dir = prepare_dir(cfg);
  RunOutput out;
  const std::vector<double> grid = cfg.v_grid.values();
  const auto rows = spectrum_scan(cfg.model.two_s, cfg.model.w, grid, cfg.jobs);
  const Basis basis(cfg.model.two_s);

  std::vector<std::string> cols{"v"};
  for (int k = 1; k <= basis.dim(); ++k) {
    cols.push_back("E_" + std::to_string(k));
  }
  const fs::path spectrum_csv = dir / "spectrum.csv";
  {
    CsvWriter csv(spectrum_csv, cols);
    std::vector<double> cells;
    for (const auto& r : rows) {
      cells.assign(1, r.v);
      cells.insert(cells.end(), r.energies.begin(), r.energies.end());
      csv.row(cells);
    }
    csv.close();
  }
  finish(out, spectrum_csv, sidecar(cfg, spectrum_csv, rows.size()));

  const fs::path states_csv = dir / "states.csv";
  json states = json::array();
  std::size_t n_rows = 0;
  {
    CsvWriter csv(states_csv, header({"v", "n", "sigma", "re", "im"}));
    for (double v : cfg.state_v) {
      ModelParams p = cfg.model;
      p.v = v;
      const EigenSystem es = eigh(build_h1(p));
      json found = json::array();
      for (const MidgapState& m : midgap_states(es, cfg.midgap_tol)) {
        const Vector psi = es.vector(m.index);
        for (int f = 0; f < basis.dim(); ++f) {
          const BasisIndex b = basis.at(f);
          const std::string cells[] = {format_double(v), format_double(b.n),
                                       b.sigma == Sigma::up ? "up" : "down",
                                       format_double(psi(f).real()),
                                       format_double(psi(f).imag())};
          csv.row_cells(cells);
          ++n_rows;
        }
        found.push_back({{"eigen_index", m.index},
                         {"energy", m.energy},
                         {"edge_weight_depth2", edge_weight(psi, cfg.model.two_s, 2)}});
      }
      states.push_back({{"v", v}, {"midgap_states", found}});
    }
    csv.close();
  }
  json meta = sidecar(cfg, states_csv, n_rows);
  meta["rows_per_state"] = basis.dim();
  meta["states"] = states;
  finish(out, states_csv, meta);
  return out;
}

RunOutput run_winding(const RunConfig& cfg) {
  const fs::path dir = prepare_dir(cfg);
  RunOutput out;

  std::vector<WindingProfile> profiles(cfg.profile_v.size());
  parallel_for(profiles.size(), cfg.jobs, [&](std::size_t i) {
    ModelParams p = cfg.model;
    p.v = cfg.profile_v[i];
    profiles[i] = local_winding_profile(build_h1(p));
    profiles[i].window = cfg.window;
  });
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const WindingProfile& prof = profiles[i];
    const fs::path path = dir / ("profile_v" + format_label(cfg.profile_v[i]) + ".csv");
    CsvWriter csv(path, header({"n", "nu"}));
    for (std::size_t k = 0; k < prof.nu.size(); ++k) {
      const double cells[] = {prof.n_values[k], prof.nu[k]};
      csv.row(cells);
    }
    csv.close();
    const DropLocation drop = profile_drop(prof);
    json meta = sidecar(cfg, path, prof.nu.size());
    meta["v"] = cfg.profile_v[i];
    meta["bulk_average"] = bulk_average_winding(prof);
    meta["drop_lower"] = optional_json(drop.lower);
    meta["drop_upper"] = optional_json(drop.upper);
    ModelParams p = cfg.model;
    p.v = cfg.profile_v[i];
    meta["meanfield_step"] = optional_json(mf_step_location(p));
    finish(out, path, meta);
  }

  const std::vector<double> grid = cfg.v_grid.values();
  const std::vector<double> averages =
      winding_transition(cfg.model.two_s, cfg.model.w, grid, cfg.window, cfg.jobs);
  const fs::path path = dir / "transition.csv";
  CsvWriter csv(path, header({"v", "nu_avg"}));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double cells[] = {grid[i], averages[i]};
    csv.row(cells);
  }
  csv.close();
  json meta = sidecar(cfg, path, grid.size());
  meta["midpoint"] = optional_json(transition_midpoint(grid, averages));
  finish(out, path, meta);
  return out;
}

RunOutput run_pump(const RunConfig& cfg) {
  const fs::path dir = prepare_dir(cfg);
  RunOutput out;
  PropagationOptions opts;
  opts.steps_per_cycle = cfg.steps_per_cycle;
  opts.samples_per_cycle = cfg.samples_per_cycle;
  opts.adiabatic_floor = cfg.adiabatic_floor;
  opts.keep_snapshots = false;

  const auto runs = pump_experiment(cfg.cycle, cfg.model.two_s, cfg.cycles, cfg.v_offsets,
                                    cfg.lambdas, opts, cfg.jobs);
  for (const PumpRun& run : runs) {
    const Trajectory& tr = run.trajectory;
    const fs::path path = dir / ("pump_voff" + format_label(run.cycle.v_offset) + "_lambda" +
                                 format_label(run.cycle.lambda) + ".csv");
    CsvWriter csv(path, header({"t", "dn", "norm", "j_integral"}));
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      const double cells[] = {tr.times[i], tr.displacement[i], tr.norm[i],
                              tr.current_integral[i]};
      csv.row(cells);
    }
    csv.close();

    json meta = sidecar(cfg, path, tr.times.size());
    meta["run"] = {{"v_offset", run.cycle.v_offset},
                   {"lambda", run.cycle.lambda},
                   {"particles", cfg.model.particles()},
                   {"n0", tr.n0},
                   {"boundary_displacement", tr.boundary_displacement},
                   {"lower_band_population", tr.lower_band_population},
                   {"ehrenfest_deviation", tr.ehrenfest_deviation()},
                   {"max_norm_drift", tr.max_norm_drift()},
                   {"plateau_ratio", plateau_ratio(tr, run.cycle.period_T, run.n_cycles)},
                   {"warnings", tr.warnings}};
    finish(out, path, meta);
    for (const auto& w : tr.warnings) {
      out.warnings.push_back(path.filename().string() + ": " + w);
    }
  }
  return out;
}

RunOutput run_qpt(const RunConfig& cfg) {
  const fs::path dir = prepare_dir(cfg);
  RunOutput out;
  const std::vector<double> grid = cfg.lambda_grid.values();
  const QptScan scan = qpt_scan(cfg.model, grid, cfg.jobs);
  const fs::path path = dir / "qpt.csv";
  CsvWriter csv(path, header({"lambda", "e0_quantum", "e0_mf"}));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double cells[] = {scan.lambda_grid[i], scan.e0_quantum[i], scan.e0_meanfield[i]};
    csv.row(cells);
  }
  csv.close();
  json meta = sidecar(cfg, path, grid.size());
  meta["lambda_crit"] = scan.lambda_crit;
  meta["theta_meanfield"] = scan.theta_meanfield;
  finish(out, path, meta);
  return out;
}

RunOutput run_experiment(const RunConfig& cfg) {
  switch (cfg.experiment) {
  case Experiment::spectrum:
    return run_spectrum(cfg);
  case Experiment::winding:
    return run_winding(cfg);
  case Experiment::pump:
    return run_pump(cfg);
  case Experiment::qpt:
    return run_qpt(cfg);
  }
  throw std::logic_error("unknown experiment");
}

} // namespace tpump
