#include "tpump/topology.hpp"

#include "tpump/errors.hpp"
#include "tpump/spectra.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace tpump;

namespace {

ModelParams params(int two_s, double w, double v) {
  ModelParams p;
  p.two_s = two_s;
  p.w = w;
  p.v = v;
  return p;
}

// Profiles at S = 50 are reused across tests.
const WindingProfile& profile_s50(double v) {
  static const WindingProfile topo = local_winding_profile(build_h1(params(100, 1, 0.5)));
  static const WindingProfile trivial = local_winding_profile(build_h1(params(100, 1, 1.5)));
  return v < 1.0 ? topo : trivial;
}

} // namespace

TEST(SshWinding, Phases) {
  EXPECT_EQ(ssh_winding(1, 0.5), 1);
  EXPECT_EQ(ssh_winding(1, 1.5), 0);
  EXPECT_EQ(ssh_winding(1, 0), 1);
  EXPECT_EQ(ssh_winding(0, 1), 0);
  EXPECT_FALSE(ssh_winding(1, 1).has_value());
  EXPECT_THROW(ssh_winding(0, 0), std::invalid_argument);
  EXPECT_THROW(ssh_winding(-1, 0.5), std::invalid_argument);
}

TEST(SshWinding, AgreesWithBerryPhaseOfBlochVector) {
  // Numerical winding of h(k) = v + w e^{-ik} around the origin.
  for (const auto& [w, v] : {std::pair{1.0, 0.5}, std::pair{1.0, 1.5}, std::pair{0.3, 0.1}}) {
    double total = 0.0;
    const int samples = 2000;
    for (int i = 0; i < samples; ++i) {
      const double k0 = 2 * std::numbers::pi * i / samples;
      const double k1 = 2 * std::numbers::pi * (i + 1) / samples;
      const Eigen::Matrix2cd a = ssh_bloch(w, v, k0);
      const Eigen::Matrix2cd b = ssh_bloch(w, v, k1);
      total += std::arg(b(1, 0) / a(1, 0));
    }
    EXPECT_EQ(std::lround(std::abs(total) / (2 * std::numbers::pi)), *ssh_winding(w, v));
  }
}

TEST(MeanFieldWinding, SpinDependentSteps) {
  const ModelParams topo = params(100, 1, 0.5);
  EXPECT_EQ(mf_winding(0, topo), 1);
  EXPECT_EQ(mf_winding(44, topo), 0);
  EXPECT_EQ(mf_winding(-44, topo), 0);
  EXPECT_EQ(mf_winding(43, topo), 1);
  EXPECT_EQ(mf_winding(0, params(100, 1, 1.5)), 0);
  EXPECT_THROW(mf_winding(51, topo), std::out_of_range);
  EXPECT_NEAR(*mf_step_location(topo), 50 * std::sqrt(0.75), 1e-12);
  EXPECT_FALSE(mf_step_location(params(100, 1, 1.5)).has_value());
}

TEST(MeanFieldWinding, MatchesSshInLargeSpinLimit) {
  for (double v : {0.5, 1.5}) {
    EXPECT_EQ(mf_winding(0, params(20000, 1, v)), ssh_winding(1, v));
  }
}

TEST(MeanFieldBloch, EigenvaluesAreMagnitudeOfH) {
  const ModelParams p = params(10, 0.8, 0.3);
  const double s = p.spin();
  for (double n : {-5.0, -2.0, 0.0, 3.0, 5.0}) {
    for (double phi : {0.0, 0.7, 2.0, 5.5}) {
      const BlochSample b = mf_bloch(n, phi, p);
      const cplx h = s * p.v + p.w * std::sqrt(s * s - n * n) * std::polar(1.0, -phi);
      EXPECT_NEAR(std::abs(b.h - h), 0.0, 1e-13);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(b.matrix);
      EXPECT_NEAR(es.eigenvalues()(1), std::abs(h), 1e-12);
      EXPECT_NEAR(es.eigenvalues()(0), -std::abs(h), 1e-12);
    }
  }
  EXPECT_NEAR(std::abs(mf_bloch(5, 1.0, p).h), s * p.v, 1e-12);
  EXPECT_NEAR(std::abs(mf_bloch(0, 0.0, p).h), s * p.v + p.w * s, 1e-12);
  EXPECT_NEAR(std::abs(mf_bloch(3, 1.0, params(10, 1, 0)).h), 4.0, 1e-12);
}

TEST(WindingOperator, BulkProfileTopologicalAndTrivial) {
  const WindingProfile& topo = profile_s50(0.5);
  const WindingProfile& trivial = profile_s50(1.5);
  ASSERT_EQ(topo.nu.size(), 101u);
  EXPECT_EQ(topo.n_values.front(), -50);
  for (std::size_t i = 0; i < topo.nu.size(); ++i) {
    if (std::abs(topo.n_values[i]) <= 10) {
      EXPECT_NEAR(topo.nu[i], 1.0, 0.05) << topo.n_values[i];
    }
    EXPECT_NEAR(trivial.nu[i], 0.0, 0.05) << trivial.n_values[i];
  }
  EXPECT_GE(bulk_average_winding(topo), 0.95);
  EXPECT_LE(bulk_average_winding(trivial), 0.05);
}

TEST(WindingOperator, ProfileFollowsMeanFieldAwayFromStep) {
  for (double v : {0.5, 1.5}) {
    const ModelParams p = params(100, 1, v);
    const WindingProfile& prof = profile_s50(v);
    const auto step = mf_step_location(p);
    for (std::size_t i = 0; i < prof.nu.size(); ++i) {
      const double n = prof.n_values[i];
      if (std::abs(n) > 45 || (step && std::abs(std::abs(n) - *step) < 4)) {
        continue;
      }
      EXPECT_NEAR(prof.nu[i], *mf_winding(n, p), 0.1) << "v " << v << " n " << n;
    }
  }
}

TEST(WindingOperator, DropNearMeanFieldStep) {
  const DropLocation drop = profile_drop(profile_s50(0.5));
  ASSERT_TRUE(drop.lower && drop.upper);
  const double step = 50 * std::sqrt(0.75);
  EXPECT_NEAR(*drop.lower, step, 3.0);
  EXPECT_NEAR(*drop.upper, step, 3.0);
  const DropLocation none = profile_drop(profile_s50(1.5));
  EXPECT_FALSE(none.lower.has_value());
}

TEST(WindingOperator, InvariantUnderPositiveScaling) {
  const HermitianOperator h = build_h1(params(20, 1, 0.6));
  const WindingProfile a = local_winding_profile(h);
  const WindingProfile b = local_winding_profile(h * 3.7);
  for (std::size_t i = 0; i < a.nu.size(); ++i) {
    EXPECT_NEAR(a.nu[i], b.nu[i], 1e-6);
  }
}

TEST(WindingOperator, ExcludesPairedZeroModes) {
  // v = 0 has two exact zero modes; they are left out of the projector.
  const SectorWinding s = winding_operator(build_h1(params(10, 1, 0.0)));
  EXPECT_EQ(s.excluded_zero_modes, 2);
  EXPECT_EQ(s.op.rows(), 11);
}

TEST(WindingOperator, UnresolvedEdgePairAtLargeS) {
  // S = 50: the edge splitting underflows double precision deep in the
  // topological phase but is resolved nearer the transition.
  const HermitianOperator deep = build_h1(params(100, 1, 0.5));
  const EigenSystem es = eigh(deep);
  EXPECT_LT(std::abs(es.values(100)), 1e-10);
  const SectorWinding s = winding_operator(deep);
  EXPECT_EQ(s.excluded_zero_modes, 2);
  EXPECT_NEAR(bulk_average_winding(local_winding_profile(s, 100)), 1.0, 0.01);

  const HermitianOperator near = build_h1(params(100, 1, 0.7));
  const EigenSystem en = eigh(near);
  EXPECT_GT(std::abs(en.values(100)), 1e-10);
  EXPECT_LT(std::abs(en.values(100)), 1e-6);
  EXPECT_EQ(winding_operator(near).excluded_zero_modes, 0);
}

TEST(WindingOperator, RejectsNonChiralZeroModes) {
  // Zero Hamiltonian: every state sits at E = 0.
  const HermitianOperator h = build_h1(params(4, 0, 0));
  EXPECT_THROW(winding_operator(h), CriticalityError);
}

TEST(BulkAverage, WindowChecks) {
  WindingProfile prof = profile_s50(0.5);
  prof.window = {-60, 10};
  EXPECT_THROW(bulk_average_winding(prof), std::invalid_argument);
  prof.window = {0.2, 0.4};
  EXPECT_THROW(bulk_average_winding(prof), std::invalid_argument);
  prof.window = {0, 0};
  EXPECT_NEAR(bulk_average_winding(prof), prof.nu[50], 1e-15);
}

TEST(Transition, MidpointNearCriticalFlip) {
  std::vector<double> grid;
  for (int i = 0; i < 11; ++i) {
    grid.push_back(0.5 + 0.1 * i);
  }
  const std::vector<double> avg = winding_transition(100, 1.0, grid, {-10, 10}, 4);
  ASSERT_EQ(avg.size(), grid.size());
  EXPECT_GE(avg.front(), 0.95);
  EXPECT_LE(avg.back(), 0.05);
  const auto mid = transition_midpoint(grid, avg);
  ASSERT_TRUE(mid.has_value());
  EXPECT_GE(*mid, 0.9);
  EXPECT_LE(*mid, 1.1);
  EXPECT_THROW(winding_transition(100, 1.0, std::vector<double>{}), std::invalid_argument);
}

TEST(Transition, MidpointInterpolatesLinearly) {
  const std::vector<double> grid{0.0, 1.0, 2.0};
  const std::vector<double> avg{1.0, 0.75, 0.25};
  EXPECT_NEAR(*transition_midpoint(grid, avg), 1.5, 1e-15);
  EXPECT_FALSE(transition_midpoint(grid, std::vector<double>{1, 1, 1}).has_value());
}
