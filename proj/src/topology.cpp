#include "tpump/topology.hpp"

#include "tpump/parallel.hpp"
#include "tpump/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tpump {

namespace {

constexpr double kZeroEnergyTol = 1e-10;
constexpr double kPinvCut = 1e-8;
constexpr double kImagTol = 1e-6;
constexpr double kCriticalRelTol = 1e-12;

std::optional<int> step_winding(double hopping_out, double hopping_in) {
  const double scale = std::max(std::abs(hopping_out), std::abs(hopping_in));
  const double diff = hopping_out - hopping_in;
  if (std::abs(diff) <= kCriticalRelTol * scale) {
    return std::nullopt;
  }
  return diff > 0.0 ? 1 : 0;
}

} // namespace

std::optional<int> ssh_winding(double w, double v) {
  if (w < 0.0 || v < 0.0 || (w == 0.0 && v == 0.0)) {
    throw std::invalid_argument("ssh_winding needs w, v >= 0, not both zero");
  }
  return step_winding(w, v);
}

Eigen::Matrix2cd ssh_bloch(double w, double v, double k) {
  const cplx h = v + w * std::exp(cplx(0.0, -k));
  Eigen::Matrix2cd m;
  m << 0.0, -h, -std::conj(h), 0.0;
  return m;
}

std::optional<int> mf_winding(double n, const ModelParams& p) {
  const double s = p.spin();
  if (std::abs(n) > s) {
    throw std::out_of_range("|n| > S in mf_winding");
  }
  return step_winding(p.w * std::sqrt(s * s - n * n), s * p.v);
}

std::optional<double> mf_step_location(const ModelParams& p) {
  if (p.v >= p.w) {
    return std::nullopt;
  }
  return p.spin() * std::sqrt(1.0 - (p.v / p.w) * (p.v / p.w));
}

BlochSample mf_bloch(double n, double phi, const ModelParams& p) {
  const double s = p.spin();
  if (std::abs(n) > s) {
    throw std::out_of_range("|n| > S in mf_bloch");
  }
  const double radial = std::sqrt(s * s - n * n);
  const cplx h = s * p.v + p.w * radial * std::exp(cplx(0.0, -phi));
  // s+ = |up><down| sits at (0,1); s- at (1,0).
  Eigen::Matrix2cd m;
  m << 0.0, -h, -std::conj(h), 0.0;
  return {n, phi, h, m};
}

SectorWinding winding_operator(const HermitianOperator& h) {
  const Basis basis(static_cast<int>(h.dim() / 2) - 1);
  const EigenSystem es = eigh(h);

  std::vector<Eigen::Index> negative;
  int zero_modes = 0;
  for (Eigen::Index k = 0; k < es.size(); ++k) {
    if (std::abs(es.values(k)) < kZeroEnergyTol) {
      ++zero_modes;
    } else if (es.values(k) < 0.0) {
      negative.push_back(k);
    }
  }
  if (zero_modes > 0) {
    const double scale = h.matrix().cwiseAbs().maxCoeff();
    const bool chiral = chiral_residual(h) < 1e-12 * std::max(scale, 1.0);
    if (!chiral || zero_modes > 2) {
      throw CriticalityError("winding undefined at criticality: " + std::to_string(zero_modes) +
                             " eigenvalues within 1e-10 of zero" +
                             (chiral ? "" : " in a non-chiral spectrum"));
    }
  }

  Matrix occupied(h.dim(), static_cast<Eigen::Index>(negative.size()));
  for (std::size_t j = 0; j < negative.size(); ++j) {
    occupied.col(static_cast<Eigen::Index>(j)) = es.vectors.col(negative[j]);
  }
  const Matrix projector = occupied * occupied.adjoint();

  const int levels = basis.levels();
  Matrix block(levels, levels);
  for (int r = 0; r < levels; ++r) {
    for (int c = 0; c < levels; ++c) {
      block(r, c) = projector(basis.index_from_offset(r, Sigma::down),
                              basis.index_from_offset(c, Sigma::up));
    }
  }
  // [Sz, C]_{rc} = (n_r - n_c) C_{rc}; the offset S cancels.
  Matrix commutator(levels, levels);
  for (int r = 0; r < levels; ++r) {
    for (int c = 0; c < levels; ++c) {
      commutator(r, c) = static_cast<double>(r - c) * block(r, c);
    }
  }

  Eigen::JacobiSVD<Matrix> svd(block, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cut = kPinvCut * sv(0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  int dropped = 0;
  double smallest_kept = sv(0);
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > cut && sv(k) > 0.0) {
      inv(k) = 1.0 / sv(k);
      smallest_kept = sv(k);
    } else {
      ++dropped;
    }
  }
  const Matrix pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();

  SectorWinding out;
  out.op = pinv * commutator;
  out.condition = smallest_kept > 0.0 ? sv(0) / smallest_kept : 0.0;
  out.dropped_singular = dropped;
  out.excluded_zero_modes = zero_modes;
  return out;
}

WindingProfile local_winding_profile(const SectorWinding& sector, int two_s) {
  const Basis basis(two_s);
  if (sector.op.rows() != basis.levels()) {
    throw std::invalid_argument("winding operator size does not match 2S + 1");
  }
  WindingProfile profile;
  profile.n_values.reserve(basis.levels());
  profile.nu.reserve(basis.levels());
  for (int m = 0; m < basis.levels(); ++m) {
    const cplx d = sector.op(m, m);
    if (std::abs(d.imag()) >= kImagTol) {
      throw NumericalError("winding profile has imaginary residue " +
                           std::to_string(d.imag()) + " at n = " +
                           std::to_string(m - basis.spin()));
    }
    profile.n_values.push_back(m - basis.spin());
    profile.nu.push_back(d.real());
  }
  return profile;
}

WindingProfile local_winding_profile(const HermitianOperator& h) {
  return local_winding_profile(winding_operator(h), static_cast<int>(h.dim() / 2) - 1);
}

double bulk_average_winding(const WindingProfile& profile) {
  if (profile.n_values.empty()) {
    throw std::invalid_argument("empty winding profile");
  }
  const auto [lo, hi] = profile.window;
  if (lo > hi || lo < profile.n_values.front() || hi > profile.n_values.back()) {
    throw std::invalid_argument("averaging window must lie inside [-S, S]");
  }
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < profile.n_values.size(); ++i) {
    if (profile.n_values[i] >= lo && profile.n_values[i] <= hi) {
      sum += profile.nu[i];
      ++count;
    }
  }
  if (count == 0) {
    throw std::invalid_argument("averaging window contains no spin projection");
  }
  return sum / count;
}

std::vector<double> winding_transition(int two_s, double w, std::span<const double> v_grid,
                                       std::pair<double, double> window, int jobs) {
  if (v_grid.empty()) {
    throw std::invalid_argument("winding transition needs a non-empty v grid");
  }
  std::vector<double> averages(v_grid.size());
  parallel_for(v_grid.size(), jobs, [&](std::size_t i) {
    ModelParams p;
    p.two_s = two_s;
    p.w = w;
    p.v = v_grid[i];
    WindingProfile profile = local_winding_profile(build_h1(p));
    profile.window = window;
    averages[i] = bulk_average_winding(profile);
  });
  return averages;
}

std::optional<double> transition_midpoint(std::span<const double> v_grid,
                                          std::span<const double> averages) {
  if (v_grid.size() != averages.size()) {
    throw std::invalid_argument("grid and averages differ in length");
  }
  for (std::size_t i = 1; i < v_grid.size(); ++i) {
    const double a = averages[i - 1] - 0.5;
    const double b = averages[i] - 0.5;
    if (a == 0.0) {
      return v_grid[i - 1];
    }
    if ((a > 0.0) != (b > 0.0)) {
      return v_grid[i - 1] + (v_grid[i] - v_grid[i - 1]) * a / (a - b);
    }
  }
  return std::nullopt;
}

DropLocation profile_drop(const WindingProfile& profile, double level) {
  const auto& n = profile.n_values;
  const auto& nu = profile.nu;
  // Centre: the projection closest to zero (n = 0, or +-1/2 for half-integer S).
  const auto centre_it = std::min_element(n.begin(), n.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b);
  });
  const auto centre = static_cast<std::ptrdiff_t>(centre_it - n.begin());
  const auto size = static_cast<std::ptrdiff_t>(n.size());

  auto walk = [&](std::ptrdiff_t step) -> std::optional<double> {
    for (std::ptrdiff_t i = centre; i + step >= 0 && i + step < size; i += step) {
      const double a = nu[static_cast<std::size_t>(i)] - level;
      const double b = nu[static_cast<std::size_t>(i + step)] - level;
      if (a >= 0.0 && b < 0.0) {
        const double x = n[static_cast<std::size_t>(i)] +
                         (n[static_cast<std::size_t>(i + step)] - n[static_cast<std::size_t>(i)]) *
                             a / (a - b);
        return std::abs(x);
      }
    }
    return std::nullopt;
  };
  return {walk(-1), walk(+1)};
}

} // namespace tpump
