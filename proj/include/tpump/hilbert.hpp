#pragma once

// Product basis |n, sigma> of a spin-S particle and a spin-1/2 particle,
// operators on it, and the three model Hamiltonians.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>

namespace tpump {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Sigma { up = 0, down = 1 };
enum class Ladder { raise, lower };
enum class PauliAxis { x, y, z };

/// Physical couplings in units of w0 (hbar = 1). The spin magnitude is stored
/// as the integer 2S so half-integer spins are exact.
struct ModelParams {
  int two_s = 10;
  double w = 1.0;
  double v = 0.0;
  double delta = 0.0;
  double lambda = 0.0;

  double spin() const noexcept { return 0.5 * two_s; }
  /// Particle number of the collective-spin reading, N = 2S.
  int particles() const noexcept { return two_s; }

  /// Throws std::invalid_argument unless 2S >= 2, w > 0 and v >= 0.
  void validate() const;
};

struct BasisIndex {
  double n;
  Sigma sigma;
  int flat;
};

/// Flat ordering: flat = 2 (n + S) + (0 for up, 1 for down); n ascending.
class Basis {
public:
  explicit Basis(int two_s);

  int two_s() const noexcept { return two_s_; }
  double spin() const noexcept { return 0.5 * two_s_; }
  /// Number of spin projections, 2S + 1.
  int levels() const noexcept { return two_s_ + 1; }
  int dim() const noexcept { return 2 * (two_s_ + 1); }

  /// Index for projection n (must be one of -S, -S+1, ..., S).
  int index(double n, Sigma sigma) const;
  /// Index from the integer offset m = n + S in [0, 2S].
  int index_from_offset(int m, Sigma sigma) const noexcept {
    return 2 * m + static_cast<int>(sigma);
  }
  BasisIndex at(int flat) const;
  double projection(int flat) const noexcept { return (flat / 2) - spin(); }

private:
  int two_s_;
};

/// Dense Hermitian matrix on the product space. Construction checks
/// max|A - A^dagger| against 1e-12 times the largest entry magnitude.
class HermitianOperator {
public:
  explicit HermitianOperator(Matrix entries);

  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const Matrix& matrix() const noexcept { return entries_; }
  cplx operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }

  HermitianOperator operator+(const HermitianOperator& other) const;
  HermitianOperator operator-(const HermitianOperator& other) const;
  HermitianOperator operator*(double scale) const;

  double expectation(const Vector& psi) const;

  /// Entrywise hermiticity defect relative to the largest entry.
  static double hermiticity_defect(const Matrix& m);

private:
  Matrix entries_;
};

/// Normalized amplitude vector over the flat basis; |norm - 1| < 1e-10 on entry.
class StateVector {
public:
  explicit StateVector(Vector amplitudes);

  static StateVector basis_state(const Basis& basis, double n, Sigma sigma);

  Eigen::Index dim() const noexcept { return amps_.size(); }
  const Vector& amplitudes() const noexcept { return amps_; }
  cplx operator[](Eigen::Index i) const { return amps_(i); }

private:
  Vector amps_;
};

/// sqrt((S -+ n)(S +- n + 1)) for raise / lower; 0 when n +- 1 leaves [-S, S].
double ladder_coeff(double spin, double n, Ladder dir);

HermitianOperator build_sz(int two_s);
HermitianOperator build_pauli(int two_s, PauliAxis axis);

// Builders require 2S >= 2 and finite couplings; unlike ModelParams::validate
// they accept w = 0, which drive cycles pass through.

/// -w (S+ s- + S- s+) - S v sx
HermitianOperator build_h1(const ModelParams& p);
/// build_h1(p) - S delta sz
HermitianOperator build_h2(const ModelParams& p);
/// (Lambda/N) Sz^2 - w (S+ s- + S- s+) - (N v / 2) sx - (N delta / 2) sz, N = 2S.
HermitianOperator build_h3(const ModelParams& p);

} // namespace tpump
