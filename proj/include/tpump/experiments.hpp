#pragma once

#include "tpump/config.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace tpump {

#ifndef TPUMP_VERSION
#define TPUMP_VERSION "0.0.0"
#endif
inline constexpr const char* kArtifactVersion = TPUMP_VERSION;

struct RunOutput {
  std::vector<std::filesystem::path> files; ///< CSVs and their sidecars
  std::vector<std::string> warnings;
};

/// spectrum.csv (v,E_1..E_D) and states.csv (v,n,sigma,re,im). states.csv holds
/// D consecutive rows per mid-gap state, states ordered by energy within each v.
RunOutput run_spectrum(const RunConfig& cfg);
/// profile_v{val}.csv (n,nu) per requested v and transition.csv (v,nu_avg).
RunOutput run_winding(const RunConfig& cfg);
/// pump_voff{offset}_lambda{lambda}.csv (t,dn,norm,j_integral) per run.
RunOutput run_pump(const RunConfig& cfg);
/// qpt.csv (lambda,e0_quantum,e0_mf); the sidecar carries lambda_crit.
RunOutput run_qpt(const RunConfig& cfg);

RunOutput run_experiment(const RunConfig& cfg);

} // namespace tpump
