#pragma once

#include "tpump/hilbert.hpp"

#include <span>
#include <vector>

namespace tpump {

struct DriveCycle;

/// Signed critical interaction -w (w + v) / sqrt(delta^2 + (w + v)^2).
double lambda_crit(const ModelParams& p);

/// Mean-field ground band 2 E0 / N = (Lambda/2) cos^2(theta) - sqrt(delta^2 + (v + w sin theta)^2),
/// with phi = 0.
double ground_band_energy(double theta, const ModelParams& p);

struct MeanFieldMinimum {
  double theta;
  double energy;
};

/// Global minimum over [0, pi]: 2001-point grid, then golden-section refinement
/// to 1e-10 in theta. The band is symmetric about pi/2, so of two degenerate
/// minima the theta <= pi/2 branch is returned.
MeanFieldMinimum mf_ground_energy(const ModelParams& p);

/// Expansion 2 E0 / N ~ A + B dtheta^2 + C dtheta^4 about theta = pi/2.
///
/// B is the closed form Lambda + w (w + v) / sqrt(delta^2 + (w + v)^2), whose
/// zero is lambda_crit; in this normalization B equals twice the curvature
/// coefficient of ground_band_energy. C is the quartic Taylor coefficient of
/// ground_band_energy from Richardson-refined finite differences.
struct QuarticCoeffs {
  double a;
  double b;
  double c;
};
QuarticCoeffs quartic_coeffs(const ModelParams& p);

/// Quantum (lowest eigenvalue of build_h3, scaled 2E/N) and mean-field ground
/// energies on a Lambda grid.
struct QptScan {
  std::vector<double> lambda_grid;
  std::vector<double> e0_quantum;
  std::vector<double> e0_meanfield;
  std::vector<double> theta_meanfield;
  double lambda_crit = 0.0;
};

QptScan qpt_scan(const ModelParams& p, std::span<const double> lambda_grid, int jobs = 1);

/// min over one period of |lambda_crit| along the drive cycle, sampled at
/// `samples` equally spaced times. No acceptance claim rides on this.
double min_critical_interaction(const DriveCycle& cycle, int samples = 1000);

} // namespace tpump
