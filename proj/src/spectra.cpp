#include "tpump/spectra.hpp"

#include "tpump/parallel.hpp"

#include <cmath>
#include <stdexcept>

namespace tpump {

namespace {

constexpr double kClusterTol = 1e-10;

void orthonormalize_clusters(EigenSystem& es) {
  const Eigen::Index n = es.size();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && es.values(end) - es.values(end - 1) < kClusterTol) {
      ++end;
    }
    const Eigen::Index width = end - start;
    if (width > 1) {
      Eigen::HouseholderQR<Matrix> qr(es.vectors.middleCols(start, width));
      Matrix q = qr.householderQ() * Matrix::Identity(es.vectors.rows(), width);
      es.vectors.middleCols(start, width) = q;
    }
    start = end;
  }
}

} // namespace

EigenSystem eigh(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition did not converge");
  }
  EigenSystem es{solver.eigenvalues(), solver.eigenvectors()};
  orthonormalize_clusters(es);
  return es;
}

EigenSystem eigh(const Matrix& m) { return eigh(HermitianOperator(m)); }

std::vector<SpectrumRow> spectrum_scan(int two_s, double w, std::span<const double> v_grid,
                                       int jobs) {
  if (v_grid.empty()) {
    throw std::invalid_argument("spectrum scan needs a non-empty v grid");
  }
  for (std::size_t i = 1; i < v_grid.size(); ++i) {
    if (!(v_grid[i] > v_grid[i - 1])) {
      throw std::invalid_argument("v grid must be strictly ascending");
    }
  }
  std::vector<SpectrumRow> rows(v_grid.size());
  parallel_for(v_grid.size(), jobs, [&](std::size_t i) {
    ModelParams p;
    p.two_s = two_s;
    p.w = w;
    p.v = v_grid[i];
    rows[i] = SpectrumRow{v_grid[i], eigh(build_h1(p)).values};
  });
  return rows;
}

double chiral_residual(const HermitianOperator& h) {
  // (sz H sz)_{ij} = s_i s_j H_{ij}, so only same-sigma entries survive the sum.
  const Matrix& m = h.matrix();
  double worst = 0.0;
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = c % 2; r < m.rows(); r += 2) {
      worst = std::max(worst, 2.0 * std::abs(m(r, c)));
    }
  }
  return worst;
}

std::vector<MidgapState> midgap_states(const EigenSystem& es, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("mid-gap tolerance must be positive");
  }
  std::vector<MidgapState> out;
  for (Eigen::Index k = 0; k < es.size(); ++k) {
    if (std::abs(es.values(k)) < tol) {
      out.push_back({k, es.values(k)});
    }
  }
  return out;
}

double edge_weight(const Vector& psi, int two_s, int depth) {
  const Basis basis(two_s);
  if (psi.size() != basis.dim()) {
    throw std::invalid_argument("state dimension does not match 2S");
  }
  if (depth < 1 || depth > basis.levels()) {
    throw std::invalid_argument("edge depth must lie in [1, 2S + 1]");
  }
  const double cut = basis.spin() - depth;
  double weight = 0.0;
  for (int i = 0; i < basis.dim(); ++i) {
    if (std::abs(basis.projection(i)) > cut) {
      weight += std::norm(psi(i));
    }
  }
  return weight;
}

double edge_weight(const StateVector& psi, int depth) {
  const int two_s = static_cast<int>(psi.dim() / 2) - 1;
  return edge_weight(psi.amplitudes(), two_s, depth);
}

} // namespace tpump
