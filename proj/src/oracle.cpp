#include "paulisim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "paulisim/errors.hpp"

namespace paulisim::oracle {

namespace {

using cd = std::complex<double>;

int qubits_for_dim(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim || n < 1) throw InvalidArgument("dimension is not a power of two");
  if (n > kMaxQubits) throw InvalidArgument("dense reference supports at most 8 qubits");
  return n;
}

int bit_of(std::size_t index, int q, int n) { return static_cast<int>((index >> (n - 1 - q)) & 1u); }

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// sum_i c_i sigma_i over m qubits, leading digit = leading tensor factor.
CMatrix assemble(std::span<const double> c, int m) {
  if (m == 0) return CMatrix::Constant(1, 1, c[0]);
  const std::size_t sub = c.size() / 4;
  const Eigen::Index half = Eigen::Index{1} << (m - 1);
  CMatrix out = CMatrix::Zero(2 * half, 2 * half);
  for (int d = 0; d < 4; ++d) {
    const auto block = c.subspan(d * sub, sub);
    if (std::all_of(block.begin(), block.end(), [](double v) { return v == 0.0; })) continue;
    out += kron(pauli_matrix(d), assemble(block, m - 1));
  }
  return out;
}

// t_i = Tr(sigma_i M) for every Pauli string i on m qubits.
void traces(const CMatrix& mat, int m, std::span<cd> out) {
  if (m == 0) {
    out[0] = mat(0, 0);
    return;
  }
  const Eigen::Index h = mat.rows() / 2;
  const CMatrix a = mat.topLeftCorner(h, h), b = mat.topRightCorner(h, h);
  const CMatrix c = mat.bottomLeftCorner(h, h), d = mat.bottomRightCorner(h, h);
  const std::size_t sub = out.size() / 4;
  traces(a + d, m - 1, out.subspan(0, sub));
  traces(b + c, m - 1, out.subspan(sub, sub));
  traces(cd(0, 1) * (b - c), m - 1, out.subspan(2 * sub, sub));
  traces(a - d, m - 1, out.subspan(3 * sub, sub));
}

void check_targets(std::span<const int> targets, int n) {
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= n) throw InvalidArgument("target qubit out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) throw InvalidArgument("targets must be distinct");
    }
  }
}

void conjugate_into(CMatrix& acc, const CMatrix& full, const CMatrix& rho) { acc += full * rho * full.adjoint(); }

}  // namespace

bool DenseState::is_valid() const {
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  if (rho.rows() != dim || rho.cols() != dim) return false;
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) return false;
  if (std::abs(rho.trace() - cd(1.0)) > 1e-12) return false;
  const CMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -1e-10;
}

DenseState pure_state(const Eigen::VectorXcd& psi) {
  const int n = qubits_for_dim(psi.size());
  return {n, psi * psi.adjoint()};
}

DenseState from_pauli(const PauliState& state) {
  const int n = state.num_qubits();
  if (n > kMaxQubits) throw InvalidArgument("dense reference supports at most 8 qubits");
  return {n, assemble(state.coeffs(), n)};
}

PauliState to_pauli(const DenseState& dense) {
  const int n = qubits_for_dim(dense.rho.rows());
  std::vector<cd> t(pauli_dim(n));
  traces(dense.rho, n, t);
  std::vector<double> a(t.size());
  const double scale = std::ldexp(1.0, -n);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const cd v = t[i] * scale;
    if (std::abs(v.imag()) > 1e-10) {
      throw InvalidState("coefficient " + pauli_label(i, n) + " has imaginary part " + std::to_string(v.imag()));
    }
    a[i] = v.real();
  }
  a[0] = scale;
  return PauliState(n, std::move(a));
}

CMatrix embed(const CMatrix& op, std::span<const int> targets, int n) {
  check_targets(targets, n);
  const int k = static_cast<int>(targets.size());
  if (op.rows() != (Eigen::Index{1} << k) || op.cols() != op.rows()) {
    throw InvalidArgument("operator dimension does not match the target count");
  }
  const std::size_t dim = std::size_t{1} << n;
  std::size_t mask = 0;
  for (int t : targets) mask |= std::size_t{1} << (n - 1 - t);
  CMatrix full = CMatrix::Zero(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t sub_col = 0;
    for (int t : targets) sub_col = (sub_col << 1) | bit_of(col, t, n);
    for (std::size_t sub_row = 0; sub_row < (std::size_t{1} << k); ++sub_row) {
      const cd v = op(sub_row, sub_col);
      if (v == cd(0.0)) continue;
      std::size_t row = col & ~mask;
      for (int j = 0; j < k; ++j) {
        if ((sub_row >> (k - 1 - j)) & 1u) row |= std::size_t{1} << (n - 1 - targets[j]);
      }
      full(row, col) = v;
    }
  }
  return full;
}

DenseState evolve_unitary(const DenseState& d, const CMatrix& u, std::span<const int> targets) {
  const Eigen::Index dim = u.rows();
  if ((u.adjoint() * u - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10) {
    throw InvalidArgument("operator is not unitary");
  }
  const CMatrix full = embed(u, targets, d.num_qubits);
  return {d.num_qubits, full * d.rho * full.adjoint()};
}

DenseState evolve_kraus(const DenseState& d, const KrausSet& kraus, std::span<const int> targets) {
  if (kraus.completeness_error() > 1e-12) throw InvalidChannel("Kraus set is not trace preserving");
  if (static_cast<int>(targets.size()) != kraus.arity) throw InvalidArgument("target count does not match arity");
  return apply_operators(d, kraus.ops, targets);
}

DenseState apply_operators(const DenseState& d, std::span<const CMatrix> ops, std::span<const int> targets) {
  CMatrix acc = CMatrix::Zero(d.rho.rows(), d.rho.cols());
  for (const auto& op : ops) conjugate_into(acc, embed(op, targets, d.num_qubits), d.rho);
  return {d.num_qubits, std::move(acc)};
}

DenseState partial_trace(const DenseState& d, std::span<const int> keep) {
  const int n = d.num_qubits;
  check_targets(keep, n);
  const int m = static_cast<int>(keep.size());
  std::size_t keep_mask = 0;
  for (int q : keep) keep_mask |= std::size_t{1} << (n - 1 - q);
  const std::size_t dim = std::size_t{1} << n;
  auto sub_index = [&](std::size_t x) {
    std::size_t s = 0;
    for (int q : keep) s = (s << 1) | bit_of(x, q, n);
    return s;
  };
  CMatrix out = CMatrix::Zero(Eigen::Index{1} << m, Eigen::Index{1} << m);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if ((i & ~keep_mask) != (j & ~keep_mask)) continue;
      out(sub_index(i), sub_index(j)) += d.rho(i, j);
    }
  }
  return {m, std::move(out)};
}

std::complex<double> trace_product(const DenseState& d, const CMatrix& op) { return (d.rho * op).trace(); }

double purity(const DenseState& d) { return (d.rho * d.rho).trace().real(); }

std::vector<double> reduced_spectrum(const DenseState& d, std::span<const int> keep) {
  const DenseState reduced = partial_trace(d, keep);
  const CMatrix herm = 0.5 * (reduced.rho + reduced.rho.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double hs_distance(const DenseState& a, const DenseState& b) {
  const CMatrix diff = a.rho - b.rho;
  return (diff * diff).trace().real();
}

CMatrix choi_matrix(const KrausSet& kraus) {
  const Eigen::Index dim = Eigen::Index{1} << kraus.arity;
  CMatrix choi = CMatrix::Zero(dim * dim, dim * dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      CMatrix unit = CMatrix::Zero(dim, dim);
      unit(i, j) = 1.0;
      CMatrix image = CMatrix::Zero(dim, dim);
      for (const auto& m : kraus.ops) image += m * unit * m.adjoint();
      choi.block(i * dim, j * dim, dim, dim) = image;
    }
  }
  return choi;
}

CMatrix choi_matrix(const Ptm& ptm) {
  const int m = ptm.arity();
  const Eigen::Index dim = Eigen::Index{1} << m;
  const std::size_t count = pauli_dim(m);
  std::vector<CMatrix> strings;
  for (std::size_t i = 0; i < count; ++i) strings.push_back(pauli_string_matrix(i, m));
  const double scale = 1.0 / static_cast<double>(dim);
  CMatrix choi = CMatrix::Zero(dim * dim, dim * dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      CMatrix unit = CMatrix::Zero(dim, dim);
      unit(i, j) = 1.0;
      CMatrix image = CMatrix::Zero(dim, dim);
      for (std::size_t col = 0; col < count; ++col) {
        const cd x = scale * (strings[col] * unit).trace();
        if (x == cd(0.0)) continue;
        for (std::size_t row = 0; row < count; ++row) {
          const double r = ptm(static_cast<int>(row), static_cast<int>(col));
          if (r != 0.0) image += r * x * strings[row];
        }
      }
      choi.block(i * dim, j * dim, dim, dim) = image;
    }
  }
  return choi;
}

double choi_min_eigenvalue(const CMatrix& choi) {
  const CMatrix herm = 0.5 * (choi + choi.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool choi_positive(const KrausSet& kraus) { return choi_min_eigenvalue(choi_matrix(kraus)) >= -1e-10; }
bool choi_positive(const Ptm& ptm) { return choi_min_eigenvalue(choi_matrix(ptm)) >= -1e-10; }

Eigen::VectorXcd reorder_leading(const Eigen::VectorXcd& psi, std::span<const int> partition) {
  const int n = qubits_for_dim(psi.size());
  check_targets(partition, n);
  std::vector<int> order(partition.begin(), partition.end());
  for (int q = 0; q < n; ++q) {
    if (std::find(partition.begin(), partition.end(), q) == partition.end()) order.push_back(q);
  }
  Eigen::VectorXcd out(psi.size());
  for (std::size_t x = 0; x < static_cast<std::size_t>(psi.size()); ++x) {
    std::size_t y = 0;
    for (int q : order) y = (y << 1) | bit_of(x, q, n);
    out(static_cast<Eigen::Index>(y)) = psi(static_cast<Eigen::Index>(x));
  }
  return out;
}

SchmidtDecomposition schmidt_decompose(const Eigen::VectorXcd& psi, std::span<const int> partition) {
  const int n = qubits_for_dim(psi.size());
  if (partition.empty() || static_cast<int>(partition.size()) >= n) {
    throw InvalidArgument("partition must be a nonempty proper subset");
  }
  if (std::abs(psi.norm() - 1.0) > 1e-10) throw InvalidArgument("state vector is not normalized");
  const Eigen::VectorXcd reordered = reorder_leading(psi, partition);
  const int da = 1 << partition.size();
  const int db = 1 << (n - static_cast<int>(partition.size()));
  CMatrix m(da, db);
  for (int a = 0; a < da; ++a) {
    for (int b = 0; b < db; ++b) m(a, b) = reordered(a * db + b);
  }
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  SchmidtDecomposition out;
  out.dim_a = da;
  out.dim_b = db;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-12) out.coefficients.push_back(sv(i));
  }
  out.rank = static_cast<int>(out.coefficients.size());
  out.basis_a = svd.matrixU().leftCols(out.rank);
  // m = U S V^dagger, so psi = sum_i s_i u_i x conj(v_i).
  out.basis_b = svd.matrixV().leftCols(out.rank).conjugate();
  return out;
}

DenseState run_schedule(const Schedule& schedule, const NoiseModel& noise, DenseState state) {
  noise.validate();
  const int n = schedule.circuit.num_qubits;
  if (state.num_qubits != n) throw InvalidArgument("initial state qubit count does not match the circuit");
  const KrausSet deco = decoherence_kraus(noise.f);
  const KrausSet decay = decay_kraus(noise.p, noise.g);
  for (const Partition& part : schedule.partitions) {
    for (std::size_t idx : part.ops) {
      const Instruction& ins = schedule.circuit.instructions[idx];
      const std::span<const int> targets(ins.targets);
      switch (ins.kind) {
        case OpKind::h:
          state = evolve_unitary(state, hadamard_matrix(), targets);
          break;
        case OpKind::rx:
        case OpKind::ry:
        case OpKind::rz:
          state = evolve_kraus(state, noisy_rotation_kraus(rotation_axis(ins.kind), ins.angle, noise.alpha_bar, noise.r),
                               targets);
          break;
        case OpKind::cx:
          state = evolve_kraus(state, noisy_cnot_kraus(noise.alpha_bar_cx, noise.r_cx), targets);
          break;
        case OpKind::measure: {
          const auto ops = qubit_measurement_kraus(axis_vector(ins.axis), noise.d1);
          state = apply_operators(state, ops, targets);
          break;
        }
        case OpKind::bell_measure: {
          const auto ops = bell_measurement_kraus(noise.d2);
          state = apply_operators(state, ops, targets);
          break;
        }
        case OpKind::barrier:
          break;
      }
    }
    if (noise.memory_is_identity()) continue;
    for (int q = 0; q < n; ++q) {
      const int target[1] = {q};
      state = evolve_kraus(state, deco, target);
      state = evolve_kraus(state, decay, target);
    }
  }
  return state;
}

DenseState thermal_state(int n, double p) {
  if (n < 1 || n > kMaxQubits) throw InvalidArgument("dense reference supports 1 to 8 qubits");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("population p must lie in [0, 1]");
  CMatrix one = CMatrix::Zero(2, 2);
  one(0, 0) = p;
  one(1, 1) = 1.0 - p;
  CMatrix rho = one;
  for (int q = 1; q < n; ++q) rho = kron(rho, one);
  return {n, std::move(rho)};
}

}  // namespace paulisim::oracle
