#include "tpump/manybody.hpp"

#include "tpump/dynamics.hpp"
#include "tpump/parallel.hpp"
#include "tpump/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tpump {

namespace {

constexpr int kThetaGrid = 2001;
constexpr double kThetaTol = 1e-10;

double golden_section(const ModelParams& p, double lo, double hi) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - ratio * (hi - lo);
  double x2 = lo + ratio * (hi - lo);
  double f1 = ground_band_energy(x1, p);
  double f2 = ground_band_energy(x2, p);
  while (hi - lo > kThetaTol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - ratio * (hi - lo);
      f1 = ground_band_energy(x1, p);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + ratio * (hi - lo);
      f2 = ground_band_energy(x2, p);
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace

double lambda_crit(const ModelParams& p) {
  if (!(p.w > 0.0)) {
    throw std::invalid_argument("lambda_crit needs w > 0");
  }
  const double wv = p.w + p.v;
  return -p.w * wv / std::sqrt(p.delta * p.delta + wv * wv);
}

double ground_band_energy(double theta, const ModelParams& p) {
  const double c = std::cos(theta);
  const double off = p.v + p.w * std::sin(theta);
  return 0.5 * p.lambda * c * c - std::sqrt(p.delta * p.delta + off * off);
}

MeanFieldMinimum mf_ground_energy(const ModelParams& p) {
  const double pi = std::numbers::pi;
  const double step = pi / (kThetaGrid - 1);
  int best = 0;
  double best_e = std::numeric_limits<double>::infinity();
  // Only the theta <= pi/2 half is searched; E(theta) = E(pi - theta).
  for (int i = 0; i <= (kThetaGrid - 1) / 2; ++i) {
    const double e = ground_band_energy(i * step, p);
    if (e < best_e) {
      best_e = e;
      best = i;
    }
  }
  const double lo = std::max(0.0, (best - 1) * step);
  const double hi = std::min(0.5 * pi, (best + 1) * step);
  double theta = golden_section(p, lo, hi);
  // Keep the endpoint if the bracket minimum sits on it.
  for (double edge : {lo, hi}) {
    if (ground_band_energy(edge, p) < ground_band_energy(theta, p)) {
      theta = edge;
    }
  }
  return {theta, ground_band_energy(theta, p)};
}

QuarticCoeffs quartic_coeffs(const ModelParams& p) {
  const double half_pi = 0.5 * std::numbers::pi;
  const double wv = p.w + p.v;
  const double a = ground_band_energy(half_pi, p);
  const double b = p.lambda + p.w * wv / std::sqrt(p.delta * p.delta + wv * wv);

  // Fourth derivative by the 7-point central stencil, Richardson-refined with
  // steps h and h/2 (stencil error is O(h^2)).
  auto fourth = [&](double h) {
    auto f = [&](int k) { return ground_band_energy(half_pi + k * h, p); };
    return (-f(-3) + 12.0 * f(-2) - 39.0 * f(-1) + 56.0 * f(0) - 39.0 * f(1) + 12.0 * f(2) -
            f(3)) /
           (6.0 * h * h * h * h);
  };
  const double coarse = fourth(1e-2);
  const double fine = fourth(5e-3);
  const double d4 = (4.0 * fine - coarse) / 3.0;
  return {a, b, d4 / 24.0};
}

QptScan qpt_scan(const ModelParams& p, std::span<const double> lambda_grid, int jobs) {
  if (lambda_grid.empty()) {
    throw std::invalid_argument("qpt scan needs a non-empty lambda grid");
  }
  QptScan scan;
  scan.lambda_grid.assign(lambda_grid.begin(), lambda_grid.end());
  scan.e0_quantum.resize(lambda_grid.size());
  scan.e0_meanfield.resize(lambda_grid.size());
  scan.theta_meanfield.resize(lambda_grid.size());
  scan.lambda_crit = lambda_crit(p);
  const double scale = 2.0 / p.particles();
  parallel_for(lambda_grid.size(), jobs, [&](std::size_t i) {
    ModelParams q = p;
    q.lambda = lambda_grid[i];
    // H3 has real entries, so the real symmetric solver gives the same spectrum.
    const Eigen::MatrixXd h = build_h3(q).matrix().real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw NumericalError("eigendecomposition did not converge in qpt scan");
    }
    scan.e0_quantum[i] = scale * solver.eigenvalues()(0);
    const MeanFieldMinimum mf = mf_ground_energy(q);
    scan.e0_meanfield[i] = mf.energy;
    scan.theta_meanfield[i] = mf.theta;
  });
  return scan;
}

double min_critical_interaction(const DriveCycle& cycle, int samples) {
  if (samples < 1) {
    throw std::invalid_argument("need at least one sample");
  }
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const DriveParams d = drive_cycle_eval(cycle, cycle.period_T * i / samples);
    if (!(d.w > 0.0)) {
      best = 0.0; // |lambda_crit| vanishes with w
      continue;
    }
    ModelParams p;
    p.w = d.w;
    p.v = d.v;
    p.delta = d.delta;
    best = std::min(best, std::abs(lambda_crit(p)));
  }
  return best;
}

} // namespace tpump
