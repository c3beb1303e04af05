#pragma once

#include "tpump/errors.hpp"
#include "tpump/hilbert.hpp"

#include <span>
#include <utility>
#include <vector>

namespace tpump {

/// Ascending eigenvalues with matching orthonormal eigenvector columns.
struct EigenSystem {
  Eigen::VectorXd values;
  Matrix vectors;

  Eigen::Index size() const noexcept { return values.size(); }
  Vector vector(Eigen::Index k) const { return vectors.col(k); }
};

/// Full dense decomposition. Eigenvectors inside clusters of eigenvalues closer
/// than 1e-10 are re-orthonormalized.
EigenSystem eigh(const HermitianOperator& h);
/// Same, for a raw matrix; throws std::invalid_argument if it is not Hermitian.
EigenSystem eigh(const Matrix& m);

struct SpectrumRow {
  double v;
  Eigen::VectorXd energies;
};

/// Spectrum of build_h1(S, w, v) for every v in an ascending, non-empty grid.
/// Rows may be computed on `jobs` threads; order always follows the grid.
std::vector<SpectrumRow> spectrum_scan(int two_s, double w, std::span<const double> v_grid,
                                       int jobs = 1);

/// max |sz H sz + H|; zero iff H anticommutes with the chiral operator sz.
double chiral_residual(const HermitianOperator& h);

struct MidgapState {
  Eigen::Index index;
  double energy;
};

/// Eigenpairs with |E| < tol (tol > 0).
std::vector<MidgapState> midgap_states(const EigenSystem& es, double tol);

/// Weight on basis states with |n| > S - depth, 1 <= depth <= 2S + 1.
double edge_weight(const StateVector& psi, int depth);
double edge_weight(const Vector& psi, int two_s, int depth);

/// Mid-gap tolerance used for the S = 5 scans, in units of w.
inline constexpr double kDefaultMidgapTol = 0.05;

} // namespace tpump
