#pragma once

#include "tpump/errors.hpp"
#include "tpump/hilbert.hpp"

#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace tpump {

/// Literal 2x2 mean-field Bloch Hamiltonian at (n, phi), basis (up, down).
struct BlochSample {
  double n;
  double phi;
  cplx h; ///< off-diagonal amplitude S v + w sqrt(S^2 - n^2) e^{-i phi}
  Eigen::Matrix2cd matrix;
};

/// SSH winding (1 + sgn(w - v)) / 2; std::nullopt marks the critical point w = v.
std::optional<int> ssh_winding(double w, double v);
/// SSH Bloch Hamiltonian -w (e^{ik} s- + e^{-ik} s+) - v sx.
Eigen::Matrix2cd ssh_bloch(double w, double v, double k);

/// Spin-dependent mean-field winding (1 + sgn(w sqrt(S^2 - n^2) - S v)) / 2.
std::optional<int> mf_winding(double n, const ModelParams& p);
/// |n| at which the mean-field winding steps from 1 to 0, if it does.
std::optional<double> mf_step_location(const ModelParams& p);
BlochSample mf_bloch(double n, double phi, const ModelParams& p);

/// Real-space winding operator on the spin-S register.
///
/// P projects onto the E < 0 eigenstates and C(n, n') = <n,down|P|n',up> is its
/// off-diagonal sigma block. The operator is C^+ [Sz, C] with C^+ the
/// pseudo-inverse keeping singular values above 1e-8 sigma_max; for a gapped
/// chiral H, C^+ = 4 C^dagger.
///
/// A chiral H may carry up to two eigenvalues within 1e-10 of zero (an edge
/// pair whose splitting is below double precision); those states are left out
/// of P. Any other near-zero eigenvalue raises CriticalityError.
struct SectorWinding {
  Matrix op;                  ///< (2S+1) x (2S+1)
  double condition = 0.0;     ///< sigma_max / smallest kept singular value
  int dropped_singular = 0;   ///< singular values removed by the regularization
  int excluded_zero_modes = 0;
};

SectorWinding winding_operator(const HermitianOperator& h);

/// nu(n) = <n|op|n> for n = -S..S, plus the bulk averaging window.
struct WindingProfile {
  std::vector<double> n_values;
  std::vector<double> nu;
  std::pair<double, double> window{-10.0, 10.0};
};

/// Throws NumericalError if any diagonal element has |Im| >= 1e-6.
WindingProfile local_winding_profile(const HermitianOperator& h);
WindingProfile local_winding_profile(const SectorWinding& sector, int two_s);

/// Mean of nu(n) over profile.window; the window must lie inside [-S, S].
double bulk_average_winding(const WindingProfile& profile);

/// Bulk averages over a v grid (for the transition curve).
std::vector<double> winding_transition(int two_s, double w, std::span<const double> v_grid,
                                       std::pair<double, double> window = {-10.0, 10.0},
                                       int jobs = 1);

/// First v where the averages cross 0.5, linearly interpolated.
std::optional<double> transition_midpoint(std::span<const double> v_grid,
                                          std::span<const double> averages);

/// Where nu(n) first falls below `level` walking outward from n = 0, linearly
/// interpolated, on the negative and positive side. Reported as |n|.
struct DropLocation {
  std::optional<double> lower;
  std::optional<double> upper;
};
DropLocation profile_drop(const WindingProfile& profile, double level = 0.5);

} // namespace tpump
