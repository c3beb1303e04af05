#include "tpump/manybody.hpp"

#include "tpump/dynamics.hpp"
#include "tpump/spectra.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace tpump;

namespace {

constexpr double kHalfPi = std::numbers::pi / 2;

// Parameters of the QPT study: v = 1, delta = 4 in units of w.
ModelParams qpt_params(int two_s, double lambda = 0.0) {
  ModelParams p;
  p.two_s = two_s;
  p.w = 1.0;
  p.v = 1.0;
  p.delta = 4.0;
  p.lambda = lambda;
  return p;
}

// Brute-force minimum of the ground band on a very fine grid over [0, pi].
std::pair<double, double> grid_minimum(const ModelParams& p, int points = 200001) {
  double best_e = INFINITY;
  double best_t = 0.0;
  for (int i = 0; i < points; ++i) {
    const double t = std::numbers::pi * i / (points - 1);
    const double e = ground_band_energy(t, p);
    if (e < best_e) {
      best_e = e;
      best_t = t;
    }
  }
  return {best_t, best_e};
}

} // namespace

TEST(LambdaCrit, ClosedFormValues) {
  EXPECT_NEAR(lambda_crit(qpt_params(200)), -2.0 / std::sqrt(20.0), 1e-15);
  ModelParams p;
  p.w = 1.0;
  EXPECT_NEAR(lambda_crit(p), -1.0, 1e-15);
  p.w = 0.0;
  EXPECT_THROW(lambda_crit(p), std::invalid_argument);
}

TEST(LambdaCrit, NegativeAndShrinkingWithOffset) {
  ModelParams p = qpt_params(10);
  double previous = -INFINITY;
  for (double d : {0.0, 1.0, 4.0, 20.0, 100.0, 1e4}) {
    p.delta = d;
    const double lc = lambda_crit(p);
    EXPECT_LT(lc, 0.0);
    EXPECT_GT(lc, previous);
    previous = lc;
  }
  // Large offset: magnitude approaches w (w + v) / delta.
  EXPECT_NEAR(-previous, 2.0 / 1e4, 1e-10);
}

TEST(GroundBand, SpecialAngles) {
  const ModelParams p = qpt_params(10, 0.7);
  EXPECT_NEAR(ground_band_energy(kHalfPi, p), -std::sqrt(16.0 + 4.0), 1e-14);
  ModelParams q = p;
  q.lambda = 0.0;
  EXPECT_NEAR(ground_band_energy(0.0, q), -std::sqrt(16.0 + 1.0), 1e-14);
}

TEST(MeanField, MinimumAtHalfPiAboveCritical) {
  for (double lambda : {0.0, 0.5, -0.3, -0.44}) {
    const ModelParams p = qpt_params(10, lambda);
    const MeanFieldMinimum m = mf_ground_energy(p);
    EXPECT_NEAR(m.theta, kHalfPi, 1e-6) << lambda;
    EXPECT_NEAR(m.energy, ground_band_energy(kHalfPi, p), 1e-12);
  }
}

TEST(MeanField, MatchesFineGridOracle) {
  const double lc = lambda_crit(qpt_params(10));
  for (double f : {0.0, 0.5, 0.99, 1.01, 1.5, 2.0, 3.0}) {
    const ModelParams p = qpt_params(10, f * lc);
    const MeanFieldMinimum m = mf_ground_energy(p);
    const auto [t, e] = grid_minimum(p);
    EXPECT_LE(m.energy, e + 1e-12) << f;
    EXPECT_NEAR(std::min(m.theta, std::numbers::pi - m.theta),
                std::min(t, std::numbers::pi - t), 1e-4)
        << f;
  }
}

TEST(MeanField, SymmetricPairBelowCritical) {
  const double lc = lambda_crit(qpt_params(10));
  for (double f : {1.1, 1.5, 2.0}) {
    const ModelParams p = qpt_params(10, f * lc);
    const MeanFieldMinimum m = mf_ground_energy(p);
    EXPECT_LT(m.theta, kHalfPi - 1e-3);
    EXPECT_NEAR(ground_band_energy(std::numbers::pi - m.theta, p), m.energy, 1e-9);
    EXPECT_LT(m.energy, ground_band_energy(kHalfPi, p));
  }
}

TEST(MeanField, BoundedByHalfPiEnergyWithEqualityAboveCritical) {
  const double lc = lambda_crit(qpt_params(10));
  for (int i = 0; i <= 40; ++i) {
    const double lambda = 2.5 * lc + i * (-2.5 * lc + 1.0) / 40;
    const ModelParams p = qpt_params(10, lambda);
    const double e = mf_ground_energy(p).energy;
    const double e_half = ground_band_energy(kHalfPi, p);
    EXPECT_LE(e, e_half + 1e-14);
    if (lambda > lc) {
      EXPECT_NEAR(e, e_half, 1e-12) << lambda;
    } else if (lambda < 1.01 * lc) {
      EXPECT_LT(e, e_half) << lambda;
    }
  }
}

TEST(Quartic, CurvatureCoefficientFlipsAtCritical) {
  const ModelParams base = qpt_params(10);
  const double lc = lambda_crit(base);
  EXPECT_NEAR(quartic_coeffs(base).b, 2.0 / std::sqrt(20.0), 1e-15);
  EXPECT_NEAR(quartic_coeffs(qpt_params(10, lc)).b, 0.0, 1e-15);
  EXPECT_GT(quartic_coeffs(qpt_params(10, lc * (1 - 1e-9))).b, 0.0);
  EXPECT_LT(quartic_coeffs(qpt_params(10, lc * (1 + 1e-9))).b, 0.0);
  EXPECT_NEAR(quartic_coeffs(base).a, ground_band_energy(kHalfPi, base), 1e-15);
}

TEST(Quartic, MatchesFiniteDifferenceTaylorSeries) {
  // E(pi/2 + d) = A + (B/2) d^2 + C d^4 + O(d^6)
  for (double lambda : {0.0, -0.3, -0.7}) {
    const ModelParams p = qpt_params(10, lambda);
    const QuarticCoeffs q = quartic_coeffs(p);
    const double h = 1e-3;
    const double second = (ground_band_energy(kHalfPi + h, p) - 2 * ground_band_energy(kHalfPi, p) +
                           ground_band_energy(kHalfPi - h, p)) /
                          (h * h);
    EXPECT_NEAR(second / 2.0, q.b / 2.0, 1e-5);
    for (double d : {0.02, 0.05}) {
      const double series = q.a + 0.5 * q.b * d * d + q.c * d * d * d * d;
      EXPECT_NEAR(ground_band_energy(kHalfPi + d, p), series, 1e-2 * std::pow(d, 4));
    }
  }
}

TEST(Quartic, FourthOrderMatchesHandExpansion) {
  // d^4 coefficient of (L/2) sin^2 d - sqrt(D^2 + (v + w cos d)^2), expanded by hand.
  auto closed_form = [](const ModelParams& p) {
    const double wv = p.w + p.v;
    const double r2 = p.delta * p.delta + wv * wv;
    const double r = std::sqrt(r2);
    const double quartic_u2 = p.w * p.w / 4.0 + wv * p.w / 12.0;
    return -p.lambda / 6.0 - r * (quartic_u2 / (2.0 * r2) - wv * wv * p.w * p.w / (8.0 * r2 * r2));
  };
  const double lc = lambda_crit(qpt_params(10));
  for (int i = 0; i <= 40; ++i) {
    const ModelParams p = qpt_params(10, 2 * lc * (1.0 - i / 40.0));
    EXPECT_NEAR(quartic_coeffs(p).c, closed_form(p), 5e-6) << p.lambda;
  }
}

TEST(Quartic, FourthOrderPositiveAroundCritical) {
  // C > 0 holds near and below Lambda_c; at Lambda = 0 it is negative.
  const double lc = lambda_crit(qpt_params(10));
  for (int i = 0; i <= 28; ++i) {
    const ModelParams p = qpt_params(10, lc * (2.0 - i * 0.05));
    EXPECT_GT(quartic_coeffs(p).c, 0.0) << p.lambda;
  }
  EXPECT_LT(quartic_coeffs(qpt_params(10, 0.0)).c, 0.0);
}

TEST(QptScan, AgreesWithMeanFieldAndDetectsKink) {
  const ModelParams p = qpt_params(100);
  const double lc = lambda_crit(p);
  std::vector<double> grid;
  for (int i = 0; i <= 40; ++i) {
    grid.push_back(2 * lc * (1.0 - i / 40.0));
  }
  const QptScan scan = qpt_scan(p, grid, 4);
  ASSERT_EQ(scan.e0_quantum.size(), grid.size());
  EXPECT_DOUBLE_EQ(scan.lambda_crit, lc);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_TRUE(std::isfinite(scan.e0_quantum[i]));
    EXPECT_LT(std::abs(scan.e0_quantum[i] - scan.e0_meanfield[i]) / std::abs(scan.e0_meanfield[i]),
              0.02);
  }
  std::size_t kink = 1;
  double worst = 0.0;
  const double h = grid[1] - grid[0];
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double d2 = (scan.e0_quantum[i + 1] - 2 * scan.e0_quantum[i] + scan.e0_quantum[i - 1]) /
                      (h * h);
    if (std::abs(d2) > worst) {
      worst = std::abs(d2);
      kink = i;
    }
  }
  EXPECT_NEAR(grid[kink] / lc, 1.0, 0.1);
}

TEST(QptScan, NonInteractingRowMatchesH2) {
  const ModelParams p = qpt_params(20);
  const QptScan scan = qpt_scan(p, std::vector<double>{0.0});
  const double e_h2 = eigh(build_h2(p)).values(0) * 2.0 / p.particles();
  EXPECT_NEAR(scan.e0_quantum[0], e_h2, 1e-12);
  EXPECT_NEAR(scan.e0_meanfield[0], -std::sqrt(20.0), 1e-12);
  EXPECT_THROW(qpt_scan(p, std::vector<double>{}), std::invalid_argument);
}

TEST(QptScan, DiscrepancyShrinksWithParticleNumber) {
  const double lambda = 1.5 * lambda_crit(qpt_params(50));
  const std::vector<double> grid{lambda};
  const QptScan small = qpt_scan(qpt_params(50), grid);
  const QptScan large = qpt_scan(qpt_params(200), grid);
  EXPECT_LT(std::abs(large.e0_quantum[0] - large.e0_meanfield[0]),
            std::abs(small.e0_quantum[0] - small.e0_meanfield[0]));
}

TEST(MinCriticalInteraction, VanishesWhereExchangeSwitchesOff) {
  DriveCycle c;
  EXPECT_NEAR(min_critical_interaction(c), 0.0, 1e-12);
  // Shifted phase so that no sample lands exactly on w = 0.
  c.period_T = 10.0;
  c.phase_offset = 0.0013;
  double best = INFINITY;
  for (int i = 0; i < 1000; ++i) {
    const DriveParams d = drive_cycle_eval(c, c.period_T * i / 1000.0);
    ModelParams p;
    p.w = d.w;
    p.v = d.v;
    p.delta = d.delta;
    best = std::min(best, p.w > 0 ? std::abs(lambda_crit(p)) : 0.0);
  }
  EXPECT_GT(best, 0.0);
  EXPECT_NEAR(min_critical_interaction(c), best, 1e-12);
  EXPECT_THROW(min_critical_interaction(c, 0), std::invalid_argument);
}
