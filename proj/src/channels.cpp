#include "paulisim/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "paulisim/detail/strata.hpp"
#include "paulisim/errors.hpp"

namespace paulisim {

namespace {

constexpr double kTracePreservationTolerance = 1e-10;
constexpr double kPovmTolerance = 1e-10;

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument(std::string(name) + " must lie in [0, 1]");
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be finite");
}

void require_targets(std::span<const int> targets, int arity, int n) {
  if (static_cast<int>(targets.size()) != arity) {
    throw InvalidArgument("channel arity " + std::to_string(arity) + " does not match " +
                          std::to_string(targets.size()) + " targets");
  }
  for (int t : targets) {
    if (t < 0 || t >= n) throw InvalidArgument("target qubit " + std::to_string(t) + " out of range");
  }
  if (arity == 2 && targets[0] == targets[1]) throw InvalidArgument("targets must be distinct");
}

// Nonzero entries of each PTM row, row 0 excluded (it is always e_0).
struct SparseRows {
  std::vector<std::vector<std::pair<int, double>>> rows;

  explicit SparseRows(const Eigen::MatrixXd& m) : rows(static_cast<std::size_t>(m.rows())) {
    for (Eigen::Index i = 1; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if (m(i, j) != 0.0) rows[i].emplace_back(static_cast<int>(j), m(i, j));
      }
    }
  }
};

template <std::size_t BlockSize>
void apply_block(std::span<double> c, std::size_t base, const std::array<std::size_t, BlockSize>& offsets,
                 const SparseRows& rows) {
  std::array<double, BlockSize> in;
  for (std::size_t e = 0; e < BlockSize; ++e) in[e] = c[base + offsets[e]];
  for (std::size_t i = 1; i < BlockSize; ++i) {
    double acc = 0.0;
    for (const auto& [j, v] : rows.rows[i]) acc += v * in[static_cast<std::size_t>(j)];
    c[base + offsets[i]] = acc;
  }
}

}  // namespace

Ptm::Ptm(int arity, Eigen::MatrixXd mat) : arity_(arity), mat_(std::move(mat)) {
  if (arity_ != 1 && arity_ != 2) throw InvalidChannel("PTM arity must be 1 or 2");
  const Eigen::Index dim = Eigen::Index{1} << (2 * arity_);
  if (mat_.rows() != dim || mat_.cols() != dim) throw InvalidChannel("PTM has the wrong shape");
  if (!mat_.allFinite()) throw InvalidChannel("PTM has non-finite entries");
  if (std::abs(mat_(0, 0) - 1.0) > kTracePreservationTolerance ||
      mat_.row(0).tail(dim - 1).cwiseAbs().maxCoeff() > kTracePreservationTolerance) {
    throw InvalidChannel("PTM is not trace preserving (first row must be (1, 0, ..., 0))");
  }
  mat_.row(0).setZero();
  mat_(0, 0) = 1.0;
}

Ptm Ptm::identity(int arity) {
  const Eigen::Index dim = Eigen::Index{1} << (2 * arity);
  return Ptm(arity, Eigen::MatrixXd::Identity(dim, dim));
}

Ptm Ptm::after(const Ptm& first) const {
  if (first.arity_ != arity_) throw InvalidArgument("cannot compose PTMs of different arity");
  return Ptm(arity_, mat_ * first.mat_);
}

void NoiseModel::validate() const {
  const std::pair<double, const char*> unit[] = {{p, "p"}, {r, "r"},   {r_cx, "r_cx"}, {d1, "d1"},
                                                 {d2, "d2"}, {f, "f"}, {g, "g"}};
  for (const auto& [v, name] : unit) require_unit_interval(v, name);
  require_finite(alpha_bar, "alpha_bar");
  require_finite(alpha_bar_cx, "alpha_bar_cx");
}

Ptm kraus_to_ptm(const KrausSet& kraus) {
  const int m = kraus.arity;
  const Eigen::Index blocks = Eigen::Index{1} << (2 * m);
  const double norm = std::ldexp(1.0, -m);
  std::vector<CMatrix> strings;
  strings.reserve(static_cast<std::size_t>(blocks));
  for (Eigen::Index j = 0; j < blocks; ++j) strings.push_back(pauli_string_matrix(static_cast<std::size_t>(j), m));

  Eigen::MatrixXd mat(blocks, blocks);
  for (Eigen::Index j = 0; j < blocks; ++j) {
    CMatrix image = CMatrix::Zero(strings[0].rows(), strings[0].cols());
    for (const auto& op : kraus.ops) image += op * strings[j] * op.adjoint();
    for (Eigen::Index i = 0; i < blocks; ++i) {
      mat(i, j) = norm * (strings[i] * image).trace().real();
    }
  }
  return Ptm(m, std::move(mat));
}

PauliState apply_ptm(PauliState state, std::span<const int> targets, const Ptm& ptm) {
  const int n = state.num_qubits();
  require_targets(targets, ptm.arity(), n);
  const SparseRows rows(ptm.matrix());
  auto c = state.mutable_coeffs();

  if (ptm.arity() == 1) {
    const std::size_t stride = digit_stride(n, targets[0]);
    const std::array<std::size_t, 4> offsets{0, stride, 2 * stride, 3 * stride};
    const auto strata = static_cast<std::ptrdiff_t>(pauli_dim(n - 1));
#pragma omp parallel for if (c.size() >= detail::kParallelThreshold)
    for (std::ptrdiff_t r = 0; r < strata; ++r) {
      apply_block(c, detail::insert_zero_digit(static_cast<std::size_t>(r), stride), offsets, rows);
    }
    return state;
  }

  const std::size_t s0 = digit_stride(n, targets[0]);
  const std::size_t s1 = digit_stride(n, targets[1]);
  std::array<std::size_t, 16> offsets{};
  for (std::size_t e = 0; e < 16; ++e) offsets[e] = (e / 4) * s0 + (e % 4) * s1;
  const auto strata = static_cast<std::ptrdiff_t>(pauli_dim(n - 2));
#pragma omp parallel for if (c.size() >= detail::kParallelThreshold)
  for (std::ptrdiff_t r = 0; r < strata; ++r) {
    apply_block(c, detail::stratum_base(static_cast<std::size_t>(r), s0, s1), offsets, rows);
  }
  return state;
}

Ptm hadamard_ptm() {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = 1.0;
  m(1, 3) = 1.0;
  m(2, 2) = -1.0;
  m(3, 1) = 1.0;
  return Ptm(1, m);
}

Ptm noisy_rotation_ptm(Axis axis, double theta, double alpha_bar, double r) {
  require_unit_interval(r, "contraction r");
  require_finite(theta, "rotation angle");
  require_finite(alpha_bar, "alpha_bar");
  const double phase = theta + alpha_bar;
  const double c = r * std::cos(phase);
  const double s = r * std::sin(phase);
  // (u, v) is the right-handed transverse pair: x->y for z, y->z for x, z->x for y.
  int along = 3, u = 1, v = 2;
  switch (axis) {
    case Axis::x: along = 1; u = 2; v = 3; break;
    case Axis::y: along = 2; u = 3; v = 1; break;
    case Axis::z: along = 3; u = 1; v = 2; break;
  }
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = 1.0;
  m(along, along) = 1.0;
  m(u, u) = c;
  m(u, v) = -s;
  m(v, u) = s;
  m(v, v) = c;
  return Ptm(1, m);
}

Ptm noisy_cnot_ptm(double alpha_bar_cx, double r_cx) {
  require_unit_interval(r_cx, "contraction r_cx");
  require_finite(alpha_bar_cx, "alpha_bar_cx");
  const double delta = std::acos(r_cx);
  if (delta == 0.0) return kraus_to_ptm(unitary_kraus(cnot_pulse_matrix(alpha_bar_cx)));
  const Ptm plus = kraus_to_ptm(unitary_kraus(cnot_pulse_matrix(alpha_bar_cx + delta)));
  const Ptm minus = kraus_to_ptm(unitary_kraus(cnot_pulse_matrix(alpha_bar_cx - delta)));
  return Ptm(2, 0.5 * (plus.matrix() + minus.matrix()));
}

Ptm decoherence_ptm(double f) {
  require_unit_interval(f, "decoherence factor f");
  Eigen::Matrix4d m = Eigen::Vector4d(1.0, f, f, 1.0).asDiagonal();
  return Ptm(1, m);
}

Ptm decay_ptm(double p, double g) {
  require_unit_interval(p, "population p");
  require_unit_interval(g, "decay factor g");
  const double sg = std::sqrt(g);
  Eigen::Matrix4d m = Eigen::Vector4d(1.0, sg, sg, g).asDiagonal();
  m(3, 0) = (2.0 * p - 1.0) * (1.0 - g);
  return Ptm(1, m);
}

Ptm memory_ptm(const NoiseModel& noise) { return decay_ptm(noise.p, noise.g).after(decoherence_ptm(noise.f)); }

PauliState memory_step(PauliState state, const NoiseModel& noise) {
  noise.validate();
  if (noise.memory_is_identity()) return state;
  const double transverse = std::sqrt(noise.g) * noise.f;
  const double longitudinal = noise.g;
  const double pull = (2.0 * noise.p - 1.0) * (1.0 - noise.g);
  const int n = state.num_qubits();
  auto c = state.mutable_coeffs();
  for (int k = 0; k < n; ++k) {
    const std::size_t stride = digit_stride(n, k);
    const auto strata = static_cast<std::ptrdiff_t>(pauli_dim(n - 1));
#pragma omp parallel for if (c.size() >= detail::kParallelThreshold)
    for (std::ptrdiff_t r = 0; r < strata; ++r) {
      const std::size_t base = detail::insert_zero_digit(static_cast<std::size_t>(r), stride);
      c[base + stride] *= transverse;
      c[base + 2 * stride] *= transverse;
      c[base + 3 * stride] = longitudinal * c[base + 3 * stride] + pull * c[base];
    }
  }
  return state;
}

PovmResult apply_povm(const PauliState& state, std::span<const int> targets, std::span<const CMatrix> effects) {
  const int n = state.num_qubits();
  const int m = static_cast<int>(targets.size());
  if (m != 1 && m != 2) throw InvalidArgument("POVM must act on one or two qubits");
  require_targets(targets, m, n);
  if (effects.empty()) throw InvalidPovm("POVM has no effects");
  const Eigen::Index dim = Eigen::Index{1} << m;

  CMatrix total = CMatrix::Zero(dim, dim);
  std::vector<CMatrix> roots;
  for (const auto& effect : effects) {
    if (effect.rows() != dim || effect.cols() != dim) throw InvalidPovm("POVM effect has the wrong dimension");
    if ((effect - effect.adjoint()).cwiseAbs().maxCoeff() > kPovmTolerance) {
      throw InvalidPovm("POVM effect is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(0.5 * (effect + effect.adjoint()));
    Eigen::VectorXd ev = solver.eigenvalues();
    if (ev.minCoeff() < -kPovmTolerance) throw InvalidPovm("POVM effect is not positive");
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = std::sqrt(std::max(ev(i), 0.0));
    roots.push_back(solver.eigenvectors() * ev.cast<std::complex<double>>().asDiagonal() *
                    solver.eigenvectors().adjoint());
    total += effect;
  }
  if ((total - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > kPovmTolerance) {
    throw InvalidPovm("POVM effects do not sum to the identity");
  }

  // p_a = Tr(rho Pi_a) = 2^n sum_j pi_j a_{j on targets, 0 elsewhere}.
  std::vector<std::size_t> offsets(static_cast<std::size_t>(dim * dim));
  for (std::size_t e = 0; e < offsets.size(); ++e) {
    offsets[e] = m == 1 ? e * digit_stride(n, targets[0])
                        : (e / 4) * digit_stride(n, targets[0]) + (e % 4) * digit_stride(n, targets[1]);
  }
  std::vector<double> probabilities;
  for (const auto& effect : effects) {
    double acc = 0.0;
    for (std::size_t e = 0; e < offsets.size(); ++e) {
      const double pi = std::ldexp((pauli_string_matrix(e, m) * effect).trace().real(), -m);
      acc += pi * state[offsets[e]];
    }
    probabilities.push_back(std::clamp(std::ldexp(acc, n), 0.0, 1.0));
  }

  const KrausSet roots_set{m, std::move(roots)};
  return {std::move(probabilities), apply_ptm(state, targets, kraus_to_ptm(roots_set))};
}

const Ptm& PtmCache::lookup(const Key& key, const std::function<Ptm()>& build) {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) it = entries_.emplace(key, std::make_unique<Ptm>(build())).first;
  return *it->second;
}

namespace {
std::int64_t rounded(double v) { return std::llround(v * 1e12); }
}  // namespace

const Ptm& PtmCache::rotation(Axis axis, double theta, double alpha_bar, double r) {
  require_finite(theta, "rotation angle");
  require_finite(alpha_bar, "alpha_bar");
  // The channel depends on theta + alpha_bar only, with period 2 pi.
  const double phase = std::remainder(theta + alpha_bar, 2.0 * std::numbers::pi);
  return lookup({static_cast<int>(axis), rounded(phase), 0, rounded(r)},
                [&] { return noisy_rotation_ptm(axis, phase, 0.0, r); });
}

const Ptm& PtmCache::cnot(double alpha_bar_cx, double r_cx) {
  require_finite(alpha_bar_cx, "alpha_bar_cx");
  // The pulse has half-angle entries, so the period in alpha is 4 pi.
  const double alpha = std::remainder(alpha_bar_cx, 4.0 * std::numbers::pi);
  return lookup({16, rounded(alpha), 0, rounded(r_cx)}, [&] { return noisy_cnot_ptm(alpha, r_cx); });
}

std::size_t PtmCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

}  // namespace paulisim
