#pragma once

#include "tpump/errors.hpp"
#include "tpump/hilbert.hpp"

#include <Eigen/Sparse>

#include <array>
#include <span>
#include <string>
#include <vector>

namespace tpump {

/// Default drive period in units of 1/w0. See README ("Choice of period").
inline constexpr double kDefaultPeriod = 6.0;
inline constexpr int kDefaultStepsPerCycle = 20000;
inline constexpr int kDefaultSamplesPerCycle = 200;

/// Cyclic drive
///   v(t) = v0 [1 - sin(2 pi t/T)] / 2 + v_offset v0
///   w(t) = w0 [1 + sin(2 pi t/T)] / 2
///   D(t) = delta0 cos(2 pi t/T)
/// evaluated at t + phase_offset T. v_offset = 0 encloses the gap-closing
/// point (w - v, D) = (0, 0); v_offset = 1.5 gives v0 [4 - sin] / 2, which does not.
struct DriveCycle {
  double v0 = 1.0;
  double w0 = 1.0;
  double delta0 = 20.0;
  double period_T = kDefaultPeriod;
  double v_offset = 0.0;
  double lambda = 0.0;
  double phase_offset = 0.0; ///< in periods; 0.25 starts at D = 0

  void validate() const;
};

/// Offset that turns the enclosing circuit into the v0 [4 - sin] / 2 one.
inline constexpr double kNonEnclosingOffset = 1.5;

struct DriveParams {
  double v;
  double w;
  double delta;
};

DriveParams drive_cycle_eval(const DriveCycle& c, double t);

/// H(t) = (Lambda/N) Sz^2 - w(t)(S+ s- + S- s+) - S v(t) sx - S D(t) sz in sparse form.
/// The sparsity pattern is fixed; only the values change with t.
class DrivenHamiltonian {
public:
  using Sparse = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

  DrivenHamiltonian(const DriveCycle& cycle, int two_s);

  const DriveCycle& cycle() const noexcept { return cycle_; }
  int two_s() const noexcept { return two_s_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }

  /// Loads the values for time t and returns the matrix.
  const Sparse& at(double t);
  HermitianOperator dense_at(double t);
  /// Upper bound on the spectral radius of H(t) over the whole cycle.
  double spectral_bound() const noexcept { return bound_; }

private:
  DriveCycle cycle_;
  int two_s_;
  Sparse matrix_;
  // Per-term values aligned with matrix_'s nonzeros: exchange, sx, sz, interaction.
  std::array<Eigen::VectorXcd, 4> terms_;
  double bound_ = 0.0;
};

/// Lowest eigenvector, phase fixed so its largest-magnitude amplitude is real
/// positive. Throws NumericalError when the ground gap is below 1e-10.
StateVector ground_state(const HermitianOperator& h);

/// <psi_t|Sz|psi_t> - <psi_0|Sz|psi_0>
double displacement(const StateVector& psi_t, const StateVector& psi_0);
double sz_expectation(const Vector& psi);

/// Ehrenfest rate j = <psi| i[H, Sz] |psi> = d<Sz>/dt.
double current_expectation(const StateVector& psi, const HermitianOperator& h);
double current_expectation(const Vector& psi, const DrivenHamiltonian::Sparse& h);

/// exp(-i H dt) psi by a Chebyshev series for a fixed spectral bound.
/// Coefficients are computed once; the series is cut where the Bessel
/// coefficients drop below 1e-17.
class ChebyshevStepper {
public:
  ChebyshevStepper(double spectral_bound, double dt);

  std::size_t terms() const noexcept { return coeffs_.size(); }
  void step(const DrivenHamiltonian::Sparse& h, Vector& psi);

private:
  double bound_;
  std::vector<cplx> coeffs_;
  Vector t0_, t1_, t2_;
};

struct PropagationOptions {
  int steps_per_cycle = kDefaultStepsPerCycle;
  int samples_per_cycle = kDefaultSamplesPerCycle;
  bool keep_snapshots = true;
  /// Lower-band population at each cycle boundary below this raises a
  /// non-adiabatic warning (only checked when Lambda = 0).
  double adiabatic_floor = 0.99;
  double norm_tolerance = 1e-6;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> displacement;
  std::vector<double> norm;
  std::vector<double> current_integral; ///< cumulative integral of j over the propagated steps
  std::vector<double> current;          ///< instantaneous j at the sample
  std::vector<double> boundary_displacement;     ///< at t = kT, k = 0..n_cycles
  std::vector<double> lower_band_population;     ///< at t = kT, k = 1..n_cycles
  std::vector<StateVector> snapshots;            ///< at t = kT, k = 0..n_cycles
  double n0 = 0.0;
  std::vector<std::string> warnings;

  /// max over samples of |displacement - current_integral|.
  double ehrenfest_deviation() const;
  double max_abs_displacement() const;
  double max_norm_drift() const;
};

/// Evolves the t = 0 ground state with the exponential midpoint rule
/// psi <- exp(-i H(t + dt/2) dt) psi; the current integral uses Simpson's rule
/// inside each step. Throws NumericalError on norm drift.
Trajectory propagate(const DriveCycle& cycle, int two_s, int n_cycles,
                     const PropagationOptions& options = {});

/// Largest |d(dn)/dt| at cycle boundaries k = 1..n relative to the largest
/// |d(dn)/dt| over the run. Small values mean flat staircase plateaus.
double plateau_ratio(const Trajectory& traj, double period, int n_cycles);

struct PumpRun {
  DriveCycle cycle;
  int n_cycles = 0;
  Trajectory trajectory;
};

/// One run per (v_offset, lambda) pair, offsets outermost; independent runs
/// execute on up to `jobs` threads.
std::vector<PumpRun> pump_experiment(const DriveCycle& base, int two_s, int n_cycles,
                                     std::span<const double> v_offsets,
                                     std::span<const double> lambdas,
                                     const PropagationOptions& options = {}, int jobs = 1);

} // namespace tpump
