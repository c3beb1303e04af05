#include "tpump/hilbert.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tpump {

namespace {

constexpr double kHermiticityTol = 1e-12;
constexpr double kNormTol = 1e-10;

// Integer offset m = n + S for a projection n; throws if n is not on the ladder.
int offset_of(int two_s, double n) {
  const double twice = 2.0 * n + two_s;
  const long twice_int = std::lround(twice);
  if (std::abs(twice - static_cast<double>(twice_int)) > 1e-9 || twice_int % 2 != 0 ||
      twice_int < 0 || twice_int > 2L * two_s) {
    throw std::out_of_range("spin projection " + std::to_string(n) +
                            " is not in {-S, ..., S} for 2S = " + std::to_string(two_s));
  }
  return static_cast<int>(twice_int / 2);
}

// Exchange part -(S+ s- + S- s+) with unit coupling.
Matrix exchange_matrix(const Basis& basis) {
  Matrix h = Matrix::Zero(basis.dim(), basis.dim());
  const double s = basis.spin();
  for (int m = 0; m + 1 < basis.levels(); ++m) {
    const double n = m - s;
    const double c = ladder_coeff(s, n, Ladder::raise);
    const int from = basis.index_from_offset(m, Sigma::up);
    const int to = basis.index_from_offset(m + 1, Sigma::down);
    h(to, from) = -c;
    h(from, to) = -c;
  }
  return h;
}

Matrix pauli_matrix(const Basis& basis, PauliAxis axis) {
  Matrix h = Matrix::Zero(basis.dim(), basis.dim());
  for (int m = 0; m < basis.levels(); ++m) {
    const int u = basis.index_from_offset(m, Sigma::up);
    const int d = basis.index_from_offset(m, Sigma::down);
    switch (axis) {
    case PauliAxis::x:
      h(u, d) = 1.0;
      h(d, u) = 1.0;
      break;
    case PauliAxis::y:
      h(u, d) = cplx(0.0, -1.0);
      h(d, u) = cplx(0.0, 1.0);
      break;
    case PauliAxis::z:
      h(u, u) = 1.0;
      h(d, d) = -1.0;
      break;
    }
  }
  return h;
}

// Builders accept the w = 0 and v = 0 points a drive cycle passes through.
void check_builder_params(const ModelParams& p) {
  if (p.two_s < 2) {
    throw std::invalid_argument("2S must be an integer >= 2, got " + std::to_string(p.two_s));
  }
  if (!std::isfinite(p.w) || !std::isfinite(p.v) || !std::isfinite(p.delta) ||
      !std::isfinite(p.lambda)) {
    throw std::invalid_argument("model couplings must be finite");
  }
}

} // namespace

void ModelParams::validate() const {
  if (two_s < 2) {
    throw std::invalid_argument("2S must be an integer >= 2, got " + std::to_string(two_s));
  }
  if (!(w > 0.0) || !std::isfinite(w)) {
    throw std::invalid_argument("w must be positive and finite");
  }
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument("v must be non-negative and finite");
  }
  if (!std::isfinite(delta) || !std::isfinite(lambda)) {
    throw std::invalid_argument("delta and lambda must be finite");
  }
}

Basis::Basis(int two_s) : two_s_(two_s) {
  if (two_s < 0) {
    throw std::invalid_argument("2S must be non-negative");
  }
}

int Basis::index(double n, Sigma sigma) const {
  return index_from_offset(offset_of(two_s_, n), sigma);
}

BasisIndex Basis::at(int flat) const {
  if (flat < 0 || flat >= dim()) {
    throw std::out_of_range("flat index " + std::to_string(flat) + " outside [0, " +
                            std::to_string(dim()) + ")");
  }
  return {projection(flat), flat % 2 == 0 ? Sigma::up : Sigma::down, flat};
}

HermitianOperator::HermitianOperator(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("operator matrix must be square");
  }
  const double defect = hermiticity_defect(entries_);
  if (defect >= kHermiticityTol) {
    throw std::invalid_argument("matrix is not Hermitian (relative defect " +
                                std::to_string(defect) + ")");
  }
}

double HermitianOperator::hermiticity_defect(const Matrix& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) {
    return 0.0;
  }
  return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& other) const {
  return HermitianOperator(entries_ + other.entries_);
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& other) const {
  return HermitianOperator(entries_ - other.entries_);
}

HermitianOperator HermitianOperator::operator*(double scale) const {
  return HermitianOperator(entries_ * scale);
}

double HermitianOperator::expectation(const Vector& psi) const {
  return psi.dot(entries_ * psi).real();
}

StateVector::StateVector(Vector amplitudes) : amps_(std::move(amplitudes)) {
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) >= kNormTol) {
    throw std::invalid_argument("state vector is not normalized (norm " +
                                std::to_string(norm) + ")");
  }
}

StateVector StateVector::basis_state(const Basis& basis, double n, Sigma sigma) {
  Vector amps = Vector::Zero(basis.dim());
  amps(basis.index(n, sigma)) = 1.0;
  return StateVector(std::move(amps));
}

double ladder_coeff(double spin, double n, Ladder dir) {
  if (std::abs(n) > spin + 1e-12) {
    throw std::out_of_range("|n| > S in ladder_coeff");
  }
  const double target = dir == Ladder::raise ? n + 1.0 : n - 1.0;
  if (std::abs(target) > spin + 1e-12) {
    return 0.0;
  }
  return dir == Ladder::raise ? std::sqrt((spin - n) * (spin + n + 1.0))
                              : std::sqrt((spin + n) * (spin - n + 1.0));
}

HermitianOperator build_sz(int two_s) {
  const Basis basis(two_s);
  Matrix h = Matrix::Zero(basis.dim(), basis.dim());
  for (int i = 0; i < basis.dim(); ++i) {
    h(i, i) = basis.projection(i);
  }
  return HermitianOperator(std::move(h));
}

HermitianOperator build_pauli(int two_s, PauliAxis axis) {
  return HermitianOperator(pauli_matrix(Basis(two_s), axis));
}

HermitianOperator build_h1(const ModelParams& p) {
  check_builder_params(p);
  const Basis basis(p.two_s);
  Matrix h = p.w * exchange_matrix(basis) - p.spin() * p.v * pauli_matrix(basis, PauliAxis::x);
  return HermitianOperator(std::move(h));
}

HermitianOperator build_h2(const ModelParams& p) {
  if (p.delta == 0.0) {
    return build_h1(p);
  }
  const Basis basis(p.two_s);
  Matrix h = build_h1(p).matrix() - p.spin() * p.delta * pauli_matrix(basis, PauliAxis::z);
  return HermitianOperator(std::move(h));
}

HermitianOperator build_h3(const ModelParams& p) {
  // N/2 = S, so the sx and sz terms coincide with those of build_h2.
  Matrix h = build_h2(p).matrix();
  if (p.lambda != 0.0) {
    const Basis basis(p.two_s);
    const double scale = p.lambda / p.particles();
    for (int i = 0; i < basis.dim(); ++i) {
      const double n = basis.projection(i);
      h(i, i) += scale * n * n;
    }
  }
  return HermitianOperator(std::move(h));
}

} // namespace tpump
