#include "paulisim/kraus.hpp"

#include <array>
#include <cmath>

#include "paulisim/errors.hpp"

namespace paulisim {

namespace {

using cd = std::complex<double>;
constexpr double kCompletenessTolerance = 1e-12;

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument(std::string(name) + " must lie in [0, 1]");
}

// Eigenvector of n.sigma with eigenvalue s (+1 / -1).
Eigen::Vector2cd spin_eigenvector(const Vec3& axis, int s) {
  const CMatrix op = axis[0] * pauli_matrix(1) + axis[1] * pauli_matrix(2) + axis[2] * pauli_matrix(3);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(op);
  return solver.eigenvectors().col(s > 0 ? 1 : 0);
}

}  // namespace

Vec3 axis_vector(Axis axis) {
  switch (axis) {
    case Axis::x: return kAxisX;
    case Axis::y: return kAxisY;
    case Axis::z: return kAxisZ;
  }
  return kAxisZ;
}

KrausSet KrausSet::make(int arity, std::vector<CMatrix> ops) {
  if (arity != 1 && arity != 2) throw InvalidChannel("Kraus arity must be 1 or 2");
  if (ops.empty()) throw InvalidChannel("Kraus set is empty");
  const Eigen::Index dim = Eigen::Index{1} << arity;
  for (const auto& m : ops) {
    if (m.rows() != dim || m.cols() != dim) throw InvalidChannel("Kraus operator has the wrong dimension");
  }
  KrausSet set{arity, std::move(ops)};
  if (set.completeness_error() > kCompletenessTolerance) {
    throw InvalidChannel("Kraus operators do not satisfy sum M^dagger M = I");
  }
  return set;
}

double KrausSet::completeness_error() const {
  const Eigen::Index dim = Eigen::Index{1} << arity;
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (const auto& m : ops) sum += m.adjoint() * m;
  return (sum - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

double KrausSet::unitality_error() const {
  const Eigen::Index dim = Eigen::Index{1} << arity;
  CMatrix sum = CMatrix::Zero(dim, dim);
  for (const auto& m : ops) sum += m * m.adjoint();
  return (sum - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
}

const CMatrix& pauli_matrix(int index) {
  static const std::array<CMatrix, 4> kPaulis = [] {
    std::array<CMatrix, 4> p;
    for (auto& m : p) m = CMatrix::Zero(2, 2);
    p[0] << 1, 0, 0, 1;
    p[1] << 0, 1, 1, 0;
    p[2] << 0, cd(0, -1), cd(0, 1), 0;
    p[3] << 1, 0, 0, -1;
    return p;
  }();
  return kPaulis.at(static_cast<std::size_t>(index));
}

CMatrix pauli_string_matrix(std::size_t index, int n) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int k = 0; k < n; ++k) out = kron(out, pauli_matrix(digit_at(index, digit_stride(n, k))));
  return out;
}

CMatrix hadamard_matrix() {
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix h(2, 2);
  h << s, s, s, -s;
  return h;
}

CMatrix rotation_matrix(Axis axis, double angle) {
  const int index = axis == Axis::x ? 1 : (axis == Axis::y ? 2 : 3);
  return std::cos(angle / 2) * pauli_matrix(0) - cd(0, 1) * std::sin(angle / 2) * pauli_matrix(index);
}

CMatrix cnot_pulse_matrix(double alpha) {
  // sigma_x exp(-i alpha sigma_x / 2) = cos(alpha/2) sigma_x - i sin(alpha/2) I
  const CMatrix flip = std::cos(alpha / 2) * pauli_matrix(1) - cd(0, 1) * std::sin(alpha / 2) * pauli_matrix(0);
  CMatrix u = CMatrix::Zero(4, 4);
  u(0, 0) = 1.0;
  u(1, 1) = 1.0;
  u.block(2, 2, 2, 2) = flip;
  return u;
}

double angle_spread(double r) {
  require_unit_interval(r, "contraction r");
  return std::acos(r);
}

KrausSet unitary_kraus(const CMatrix& u) {
  const int arity = u.rows() == 2 ? 1 : 2;
  return KrausSet::make(arity, {u});
}

KrausSet hadamard_kraus() { return unitary_kraus(hadamard_matrix()); }

KrausSet noisy_rotation_kraus(Axis axis, double theta, double alpha_bar, double r) {
  const double delta = angle_spread(r);
  const double w = std::sqrt(0.5);
  return KrausSet::make(1, {w * rotation_matrix(axis, theta + alpha_bar + delta),
                            w * rotation_matrix(axis, theta + alpha_bar - delta)});
}

KrausSet noisy_cnot_kraus(double alpha_bar, double r) {
  const double delta = angle_spread(r);
  const double w = std::sqrt(0.5);
  return KrausSet::make(2, {w * cnot_pulse_matrix(alpha_bar + delta), w * cnot_pulse_matrix(alpha_bar - delta)});
}

KrausSet decoherence_kraus(double f) {
  require_unit_interval(f, "decoherence factor f");
  return KrausSet::make(1, {std::sqrt((1 + f) / 2) * pauli_matrix(0), std::sqrt((1 - f) / 2) * pauli_matrix(3)});
}

KrausSet decay_kraus(double p, double g) {
  require_unit_interval(p, "population p");
  require_unit_interval(g, "decay factor g");
  CMatrix m0 = CMatrix::Zero(2, 2), m1 = CMatrix::Zero(2, 2), m2 = CMatrix::Zero(2, 2), m3 = CMatrix::Zero(2, 2);
  const double sp = std::sqrt(p), sq = std::sqrt(1 - p), sg = std::sqrt(g), sh = std::sqrt(1 - g);
  m0 << sp, 0, 0, sp * sg;
  m1 << 0, sp * sh, 0, 0;
  m2 << sq * sg, 0, 0, sq;
  m3 << 0, 0, sq * sh, 0;
  return KrausSet::make(1, {m0, m1, m2, m3});
}

KrausSet identity_kraus(int arity) {
  const Eigen::Index dim = Eigen::Index{1} << arity;
  return KrausSet::make(arity, {CMatrix::Identity(dim, dim)});
}

std::vector<CMatrix> qubit_measurement_kraus(const Vec3& axis, double d1, std::optional<int> outcome) {
  require_unit_interval(d1, "measurement fidelity d1");
  const Eigen::Vector2cd up = spin_eigenvector(axis, +1);
  const Eigen::Vector2cd down = spin_eigenvector(axis, -1);
  const double keep = std::sqrt((1 + d1) / 2);
  const double flip = std::sqrt((1 - d1) / 2);
  std::vector<CMatrix> ops;
  for (int s : {+1, -1}) {
    if (outcome && *outcome != s) continue;
    const Eigen::Vector2cd& same = s > 0 ? up : down;
    const Eigen::Vector2cd& other = s > 0 ? down : up;
    ops.push_back(keep * same * same.adjoint());
    ops.push_back(flip * same * other.adjoint());
  }
  return ops;
}

Eigen::Vector4cd bell_vector(int outcome) {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  switch (outcome) {
    case 0: v << s, 0, 0, s; break;
    case 1: v << s, 0, 0, -s; break;
    case 2: v << 0, s, s, 0; break;
    case 3: v << 0, s, -s, 0; break;
    default: throw InvalidArgument("Bell outcome index out of range");
  }
  return v;
}

std::vector<CMatrix> bell_measurement_kraus(double d2, std::optional<int> outcome) {
  require_unit_interval(d2, "measurement fidelity d2");
  std::vector<CMatrix> ops;
  for (int b = 0; b < 4; ++b) {
    if (outcome && *outcome != b) continue;
    for (int c = 0; c < 4; ++c) {
      int overlap = 0;
      for (int j = 0; j < 3; ++j) overlap += kBellSigns[b][j] * kBellSigns[c][j];
      const double weight = 0.25 * (1.0 + d2 * overlap);
      ops.push_back(std::sqrt(std::max(weight, 0.0)) * bell_vector(b) * bell_vector(c).adjoint());
    }
  }
  return ops;
}

}  // namespace paulisim
