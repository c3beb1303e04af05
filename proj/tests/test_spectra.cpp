#include "tpump/spectra.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace tpump;

namespace {

ModelParams params(int two_s, double w, double v, double delta = 0.0) {
  ModelParams p;
  p.two_s = two_s;
  p.w = w;
  p.v = v;
  p.delta = delta;
  return p;
}

void expect_valid_decomposition(const Matrix& h, const EigenSystem& es) {
  const double scale = std::max(1.0, es.values.cwiseAbs().maxCoeff());
  const Matrix residual = h * es.vectors - es.vectors * es.values.cast<cplx>().asDiagonal();
  EXPECT_LT(residual.cwiseAbs().maxCoeff(), 1e-9 * scale);
  const Matrix gram = es.vectors.adjoint() * es.vectors;
  EXPECT_LT((gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff(), 1e-10);
  for (Eigen::Index k = 1; k < es.size(); ++k) {
    EXPECT_LE(es.values(k - 1), es.values(k));
  }
}

} // namespace

TEST(Eigh, DiagonalInput) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 3;
  m(1, 1) = 1;
  m(2, 2) = 2;
  const EigenSystem es = eigh(m);
  EXPECT_DOUBLE_EQ(es.values(0), 1);
  EXPECT_DOUBLE_EQ(es.values(1), 2);
  EXPECT_DOUBLE_EQ(es.values(2), 3);
}

TEST(Eigh, RejectsNonHermitian) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = cplx(0, 1);
  m(1, 0) = cplx(0, 1);
  EXPECT_THROW(eigh(m), std::invalid_argument);
}

TEST(Eigh, EmbeddedSigmaXHasDegenerateUnitSpectrum) {
  const HermitianOperator x = build_pauli(10, PauliAxis::x);
  const EigenSystem es = eigh(x);
  for (Eigen::Index k = 0; k < es.size(); ++k) {
    EXPECT_NEAR(es.values(k), k < 11 ? -1.0 : 1.0, 1e-13);
  }
  expect_valid_decomposition(x.matrix(), es);
}

TEST(Eigh, DecompositionInvariantsOnModelHamiltonians) {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 8; ++trial) {
    const HermitianOperator h = build_h2(params(3 + 4 * trial, u(rng) + 0.05, u(rng), u(rng) - 1));
    expect_valid_decomposition(h.matrix(), eigh(h));
  }
  // Exactly degenerate zero modes at v = 0 must still come out orthonormal.
  const HermitianOperator h = build_h1(params(10, 1, 0));
  expect_valid_decomposition(h.matrix(), eigh(h));
}

TEST(SpectrumScan, RowsFollowGrid) {
  const std::vector<double> grid{0.0, 0.4, 1.6};
  const auto rows = spectrum_scan(10, 1.0, grid);
  ASSERT_EQ(rows.size(), 3u);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(rows[i].v, grid[i]);
    EXPECT_EQ(rows[i].energies.size(), 22);
  }
  auto count_small = [](const Eigen::VectorXd& e, double tol) {
    return std::count_if(e.begin(), e.end(), [&](double x) { return std::abs(x) < tol; });
  };
  EXPECT_EQ(count_small(rows[0].energies, 1e-12), 2);
  EXPECT_EQ(count_small(rows[1].energies, kDefaultMidgapTol), 2);
  EXPECT_EQ(count_small(rows[2].energies, kDefaultMidgapTol), 0);
}

TEST(SpectrumScan, ParallelMatchesSerial) {
  std::vector<double> grid;
  for (int i = 0; i < 21; ++i) {
    grid.push_back(0.1 * i);
  }
  const auto serial = spectrum_scan(10, 1.0, grid, 1);
  const auto parallel = spectrum_scan(10, 1.0, grid, 4);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(serial[i].energies, parallel[i].energies);
  }
}

TEST(SpectrumScan, RejectsBadGrids) {
  EXPECT_THROW(spectrum_scan(10, 1.0, std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(spectrum_scan(10, 1.0, std::vector<double>{0.5, 0.2}), std::invalid_argument);
}

TEST(ChiralResidual, ExactForH1BrokenByOffset) {
  EXPECT_LT(chiral_residual(build_h1(params(10, 1, 0.7))), 1e-12);
  EXPECT_LT(chiral_residual(build_h2(params(10, 1, 0.7, 0.0))), 1e-12);
  EXPECT_NEAR(chiral_residual(build_h2(params(2, 0, 0, 1.0))), 2.0, 1e-14);
  EXPECT_GT(chiral_residual(build_h2(params(10, 1, 0.7, 0.2))), 0.0);
}

TEST(ChiralPairing, SigmaZMapsEigenvectorToNegativeEnergyPartner) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  const Matrix z = build_pauli(10, PauliAxis::z).matrix();
  for (int trial = 0; trial < 10; ++trial) {
    const HermitianOperator h = build_h1(params(10, u(rng) + 0.05, u(rng)));
    const EigenSystem es = eigh(h);
    for (Eigen::Index k = 0; k < es.size(); ++k) {
      const Vector partner = z * es.vector(k);
      const Vector r = h.matrix() * partner + es.values(k) * partner;
      EXPECT_LT(r.norm(), 1e-9);
    }
    for (Eigen::Index k = 0; k < es.size(); ++k) {
      EXPECT_NEAR(es.values(k), -es.values(es.size() - 1 - k), 1e-9);
    }
  }
}

TEST(Midgap, EdgeStatesPresentInTopologicalPhaseOnly) {
  const EigenSystem topo = eigh(build_h1(params(10, 1, 0.4)));
  const auto found = midgap_states(topo, kDefaultMidgapTol);
  ASSERT_EQ(found.size(), 2u);
  for (const MidgapState& m : found) {
    EXPECT_LT(std::abs(m.energy), kDefaultMidgapTol);
    EXPECT_GE(edge_weight(topo.vector(m.index), 10, 2), 0.9);
  }
  EXPECT_TRUE(midgap_states(eigh(build_h1(params(10, 1, 1.6))), kDefaultMidgapTol).empty());
  EXPECT_EQ(midgap_states(eigh(build_h1(params(10, 1, 0.0))), 1e-12).size(), 2u);
  EXPECT_THROW(midgap_states(topo, 0.0), std::invalid_argument);
}

TEST(EdgeWeight, ReferenceStates) {
  const Basis b(10);
  EXPECT_DOUBLE_EQ(edge_weight(StateVector::basis_state(b, 5, Sigma::up), 1), 1.0);
  EXPECT_DOUBLE_EQ(edge_weight(StateVector::basis_state(b, 0, Sigma::up), 5), 0.0);
  const Vector uniform = Vector::Constant(b.dim(), 1.0 / std::sqrt(b.dim()));
  EXPECT_NEAR(edge_weight(StateVector(uniform), 11), 1.0, 1e-14);
  EXPECT_NEAR(edge_weight(StateVector(uniform), 1), 4.0 / 22.0, 1e-14);
  EXPECT_THROW(edge_weight(StateVector(uniform), 0), std::invalid_argument);
  EXPECT_THROW(edge_weight(StateVector(uniform), 12), std::invalid_argument);
}

TEST(EdgeWeight, InvariantUnderPhaseAndSigmaZ) {
  std::mt19937 rng(9);
  std::normal_distribution<double> g;
  const Matrix z = build_pauli(10, PauliAxis::z).matrix();
  for (int trial = 0; trial < 10; ++trial) {
    Vector v(22);
    for (auto& x : v) {
      x = cplx(g(rng), g(rng));
    }
    v.normalize();
    const cplx phase = std::polar(1.0, g(rng));
    for (int depth = 1; depth <= 11; ++depth) {
      const double w0 = edge_weight(v, 10, depth);
      EXPECT_NEAR(edge_weight(Vector(phase * v), 10, depth), w0, 1e-14);
      EXPECT_NEAR(edge_weight(Vector(z * v), 10, depth), w0, 1e-14);
      EXPECT_GE(w0, 0.0);
      EXPECT_LE(w0, 1.0 + 1e-14);
    }
  }
}
