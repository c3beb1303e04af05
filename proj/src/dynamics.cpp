#include "tpump/dynamics.hpp"

#include "tpump/parallel.hpp"
#include "tpump/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace tpump {

namespace {

constexpr double kGroundGapTol = 1e-10;
constexpr double kBesselCut = 1e-17;

double row_sum_norm(const Matrix& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

} // namespace

void DriveCycle::validate() const {
  if (!(period_T > 0.0) || !std::isfinite(period_T)) {
    throw std::invalid_argument("cycle period must be positive");
  }
  if (!(w0 >= 0.0) || !(v0 >= 0.0)) {
    throw std::invalid_argument("v0 and w0 must be non-negative");
  }
  // min_t v(t) = v_offset v0 keeps v(t) >= 0.
  if (v_offset < 0.0) {
    throw std::invalid_argument("v_offset must be non-negative so that v(t) >= 0");
  }
  if (!std::isfinite(delta0) || !std::isfinite(lambda) || !std::isfinite(phase_offset)) {
    throw std::invalid_argument("cycle parameters must be finite");
  }
}

DriveParams drive_cycle_eval(const DriveCycle& c, double t) {
  if (t < 0.0) {
    throw std::invalid_argument("drive time must be non-negative");
  }
  const double phase = 2.0 * std::numbers::pi * (t / c.period_T + c.phase_offset);
  const double s = std::sin(phase);
  return {c.v0 * (1.0 - s) / 2.0 + c.v_offset * c.v0, c.w0 * (1.0 + s) / 2.0,
          c.delta0 * std::cos(phase)};
}

DrivenHamiltonian::DrivenHamiltonian(const DriveCycle& cycle, int two_s)
    : cycle_(cycle), two_s_(two_s) {
  cycle_.validate();
  ModelParams unit;
  unit.two_s = two_s;
  unit.w = 0.0;
  unit.v = 0.0;

  ModelParams exchange = unit;
  exchange.w = 1.0;
  ModelParams flip = unit;
  flip.v = 1.0;
  ModelParams offset = unit;
  offset.delta = 1.0;
  ModelParams interaction = unit;
  interaction.lambda = cycle_.lambda;

  const std::array<Matrix, 4> dense{build_h1(exchange).matrix(), build_h1(flip).matrix(),
                                    build_h2(offset).matrix(), build_h3(interaction).matrix()};

  const Eigen::Index dim = dense[0].rows();
  std::vector<Eigen::Triplet<cplx>> pattern;
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      bool used = false;
      for (const auto& m : dense) {
        used = used || m(r, c) != 0.0;
      }
      if (used) {
        pattern.emplace_back(r, c, cplx(0.0));
      }
    }
  }
  matrix_.resize(dim, dim);
  matrix_.setFromTriplets(pattern.begin(), pattern.end());
  matrix_.makeCompressed();

  const Eigen::Index nnz = matrix_.nonZeros();
  for (std::size_t term = 0; term < dense.size(); ++term) {
    terms_[term].resize(nnz);
    Eigen::Index k = 0;
    for (Eigen::Index r = 0; r < matrix_.outerSize(); ++r) {
      for (Sparse::InnerIterator it(matrix_, r); it; ++it) {
        terms_[term](k++) = dense[term](it.row(), it.col());
      }
    }
  }

  const double v_max = cycle_.v0 * std::max(std::abs(cycle_.v_offset),
                                            std::abs(1.0 + cycle_.v_offset));
  bound_ = std::abs(cycle_.w0) * row_sum_norm(dense[0]) + v_max * row_sum_norm(dense[1]) +
           std::abs(cycle_.delta0) * row_sum_norm(dense[2]) + row_sum_norm(dense[3]);
  if (bound_ == 0.0) {
    bound_ = 1.0;
  }
}

const DrivenHamiltonian::Sparse& DrivenHamiltonian::at(double t) {
  const DriveParams d = drive_cycle_eval(cycle_, t);
  Eigen::Map<Eigen::VectorXcd> values(matrix_.valuePtr(), matrix_.nonZeros());
  values = d.w * terms_[0] + d.v * terms_[1] + d.delta * terms_[2] + terms_[3];
  return matrix_;
}

HermitianOperator DrivenHamiltonian::dense_at(double t) {
  return HermitianOperator(Matrix(at(t)));
}

StateVector ground_state(const HermitianOperator& h) {
  const EigenSystem es = eigh(h);
  if (es.size() > 1 && es.values(1) - es.values(0) < kGroundGapTol) {
    std::ostringstream msg;
    msg << "degenerate ground state (gap " << es.values(1) - es.values(0) << ")";
    throw NumericalError(msg.str());
  }
  Vector psi = es.vectors.col(0);
  Eigen::Index largest = 0;
  psi.cwiseAbs().maxCoeff(&largest);
  psi *= std::conj(psi(largest)) / std::abs(psi(largest));
  psi(largest) = std::abs(psi(largest));
  return StateVector(psi.normalized());
}

double sz_expectation(const Vector& psi) {
  const Eigen::Index dim = psi.size();
  const double spin = 0.5 * (static_cast<double>(dim / 2) - 1.0);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    acc += (static_cast<double>(i / 2) - spin) * std::norm(psi(i));
  }
  return acc;
}

double displacement(const StateVector& psi_t, const StateVector& psi_0) {
  if (psi_t.dim() != psi_0.dim()) {
    throw std::invalid_argument("states differ in dimension");
  }
  return sz_expectation(psi_t.amplitudes()) - sz_expectation(psi_0.amplitudes());
}

namespace {

Vector apply_sz(const Vector& psi) {
  const Eigen::Index dim = psi.size();
  const double spin = 0.5 * (static_cast<double>(dim / 2) - 1.0);
  Vector out(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    out(i) = (static_cast<double>(i / 2) - spin) * psi(i);
  }
  return out;
}

} // namespace

// i<[H, Sz]> = i (z - conj z) with z = <psi|H Sz|psi>, i.e. -2 Im z.
double current_expectation(const StateVector& psi, const HermitianOperator& h) {
  if (psi.dim() != h.dim()) {
    throw std::invalid_argument("state and operator differ in dimension");
  }
  const Vector& a = psi.amplitudes();
  return -2.0 * a.dot(h.matrix() * apply_sz(a)).imag();
}

double current_expectation(const Vector& psi, const DrivenHamiltonian::Sparse& h) {
  const Vector hs = h * apply_sz(psi);
  return -2.0 * psi.dot(hs).imag();
}

ChebyshevStepper::ChebyshevStepper(double spectral_bound, double dt) : bound_(spectral_bound) {
  if (!(spectral_bound > 0.0) || !(dt > 0.0)) {
    throw std::invalid_argument("Chebyshev stepper needs positive bound and step");
  }
  const double a = spectral_bound * dt;
  cplx phase(1.0, 0.0); // (-i)^k
  for (int k = 0;; ++k) {
    const double j = std::cyl_bessel_j(static_cast<double>(k), a);
    coeffs_.push_back((k == 0 ? 1.0 : 2.0) * j * phase);
    phase *= cplx(0.0, -1.0);
    if (k > a && std::abs(j) < kBesselCut &&
        std::abs(std::cyl_bessel_j(static_cast<double>(k + 1), a)) < kBesselCut) {
      break;
    }
  }
}

void ChebyshevStepper::step(const DrivenHamiltonian::Sparse& h, Vector& psi) {
  const double scale = 1.0 / bound_;
  t0_ = psi;
  t1_.noalias() = scale * (h * psi);
  Vector acc = coeffs_[0] * t0_ + coeffs_[1] * t1_;
  for (std::size_t k = 2; k < coeffs_.size(); ++k) {
    t2_.noalias() = (2.0 * scale) * (h * t1_);
    t2_ -= t0_;
    acc += coeffs_[k] * t2_;
    std::swap(t0_, t1_);
    std::swap(t1_, t2_);
  }
  psi = std::move(acc);
}

double Trajectory::ehrenfest_deviation() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < displacement.size(); ++i) {
    worst = std::max(worst, std::abs(displacement[i] - current_integral[i]));
  }
  return worst;
}

double Trajectory::max_abs_displacement() const {
  double worst = 0.0;
  for (double d : displacement) {
    worst = std::max(worst, std::abs(d));
  }
  return worst;
}

double Trajectory::max_norm_drift() const {
  double worst = 0.0;
  for (double n : norm) {
    worst = std::max(worst, std::abs(n - 1.0));
  }
  return worst;
}

Trajectory propagate(const DriveCycle& cycle, int two_s, int n_cycles,
                     const PropagationOptions& options) {
  if (n_cycles < 1) {
    throw std::invalid_argument("need at least one cycle");
  }
  if (options.steps_per_cycle < 1000) {
    throw std::invalid_argument("steps_per_cycle must be at least 1000");
  }
  if (options.samples_per_cycle < 1 || options.samples_per_cycle > options.steps_per_cycle) {
    throw std::invalid_argument("samples_per_cycle must lie in [1, steps_per_cycle]");
  }

  DrivenHamiltonian hamiltonian(cycle, two_s);
  const double dt = cycle.period_T / options.steps_per_cycle;
  // Each step is taken as an even number of sub-steps with the same H_mid; the
  // intermediate states feed composite Simpson quadrature of j. The count keeps
  // bound * dt_sub <= 0.4 so the fast inter-band oscillation of j is resolved.
  const int substeps = 2 * std::max(1, static_cast<int>(std::ceil(
                                           hamiltonian.spectral_bound() * dt / 0.8)));
  const double dt_sub = dt / substeps;
  ChebyshevStepper stepper(hamiltonian.spectral_bound(), dt_sub);
  const int stride = std::max(1, options.steps_per_cycle / options.samples_per_cycle);

  const StateVector initial = ground_state(hamiltonian.dense_at(0.0));
  Vector psi = initial.amplitudes();

  Trajectory traj;
  traj.n0 = sz_expectation(psi);
  traj.boundary_displacement.push_back(0.0);
  if (options.keep_snapshots) {
    traj.snapshots.push_back(initial);
  }

  // Within a step the state evolves under the constant H_mid, so d<Sz>/dt is the
  // commutator expectation with H_mid. The reported j(t) uses H(t).
  double j_integral = 0.0;
  auto record = [&](double t, double j) {
    traj.times.push_back(t);
    traj.displacement.push_back(traj.times.size() == 1 ? 0.0 : sz_expectation(psi) - traj.n0);
    traj.norm.push_back(psi.norm());
    traj.current_integral.push_back(j_integral);
    traj.current.push_back(j);
  };
  record(0.0, current_expectation(psi, hamiltonian.at(0.0)));

  const long total = static_cast<long>(n_cycles) * options.steps_per_cycle;
  for (long k = 0; k < total; ++k) {
    const auto& h_mid = hamiltonian.at((static_cast<double>(k) + 0.5) * dt);
    double weighted = current_expectation(psi, h_mid);
    for (int m = 1; m <= substeps; ++m) {
      stepper.step(h_mid, psi);
      const double j = current_expectation(psi, h_mid);
      weighted += (m == substeps ? 1.0 : (m % 2 == 1 ? 4.0 : 2.0)) * j;
    }
    j_integral += dt_sub / 3.0 * weighted;
    const double t = static_cast<double>(k + 1) * dt;

    const bool boundary = (k + 1) % options.steps_per_cycle == 0;
    if ((k + 1) % stride == 0 || boundary) {
      record(t, current_expectation(psi, hamiltonian.at(t)));
      const double drift = std::abs(traj.norm.back() - 1.0);
      if (drift > options.norm_tolerance) {
        std::ostringstream msg;
        msg << "norm drift " << drift << " at t = " << t << " (step " << k + 1 << ", dt "
            << dt << ", " << stepper.terms() << " Chebyshev terms)";
        throw NumericalError(msg.str());
      }
    }
    if (boundary) {
      const int cycle_index = static_cast<int>((k + 1) / options.steps_per_cycle);
      traj.boundary_displacement.push_back(sz_expectation(psi) - traj.n0);
      if (options.keep_snapshots) {
        traj.snapshots.emplace_back(psi / psi.norm());
      }
      const EigenSystem es = eigh(hamiltonian.dense_at(t));
      const Eigen::Index half = es.size() / 2;
      const double lower = (es.vectors.leftCols(half).adjoint() * psi).squaredNorm();
      traj.lower_band_population.push_back(lower);
      if (cycle.lambda == 0.0 && lower < options.adiabatic_floor) {
        std::ostringstream msg;
        msg << "non-adiabatic: lower-band population " << lower << " after cycle "
            << cycle_index;
        traj.warnings.push_back(msg.str());
      }
    }
  }
  return traj;
}

double plateau_ratio(const Trajectory& traj, double period, int n_cycles) {
  double peak = 0.0;
  for (double j : traj.current) {
    peak = std::max(peak, std::abs(j));
  }
  if (peak == 0.0) {
    return 0.0;
  }
  double worst = 0.0;
  for (int k = 1; k <= n_cycles; ++k) {
    const double target = k * period;
    const auto it = std::min_element(traj.times.begin(), traj.times.end(),
                                     [&](double a, double b) {
                                       return std::abs(a - target) < std::abs(b - target);
                                     });
    const auto idx = static_cast<std::size_t>(it - traj.times.begin());
    worst = std::max(worst, std::abs(traj.current[idx]));
  }
  return worst / peak;
}

std::vector<PumpRun> pump_experiment(const DriveCycle& base, int two_s, int n_cycles,
                                     std::span<const double> v_offsets,
                                     std::span<const double> lambdas,
                                     const PropagationOptions& options, int jobs) {
  std::vector<PumpRun> runs;
  for (double offset : v_offsets) {
    for (double lambda : lambdas) {
      PumpRun run;
      run.cycle = base;
      run.cycle.v_offset = offset;
      run.cycle.lambda = lambda;
      run.n_cycles = n_cycles;
      runs.push_back(run);
    }
  }
  parallel_for(runs.size(), jobs, [&](std::size_t i) {
    runs[i].trajectory = propagate(runs[i].cycle, two_s, n_cycles, options);
  });
  return runs;
}

} // namespace tpump
