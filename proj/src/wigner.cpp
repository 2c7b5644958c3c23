#include "paulisim/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "paulisim/errors.hpp"

namespace paulisim {

namespace {

constexpr double kNegativityFloor = 1e-14;

using Basis = std::array<std::array<double, 4>, 4>;  // [cell 2i+j][pauli digit]

Basis qubit_basis(SigmaYSign sign, double scale) {
  const double ys = sign == SigmaYSign::plus ? 1.0 : -1.0;
  Basis b{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double si = i ? -1.0 : 1.0, sj = j ? -1.0 : 1.0;
      auto& cell = b[2 * i + j];
      cell[0] = 0.5 * scale;
      cell[1] = 0.5 * scale * sj;
      cell[2] = 0.5 * scale * ys * si * sj;
      cell[3] = 0.5 * scale * si;
    }
  }
  return b;
}

// Applies the 4x4 basis change on every digit, then reorders the interleaved
// (i_k, j_k) digits into a row-major 2^n x 2^n grid.
std::vector<double> tensor_transform(std::span<const double> coeffs, int n, const Basis& basis) {
  std::vector<double> v(coeffs.begin(), coeffs.end());
  for (int k = 0; k < n; ++k) {
    const std::size_t s = digit_stride(n, k);
    for (std::size_t base = 0; base < v.size(); ++base) {
      if (digit_at(base, s) != 0) continue;
      const std::array<double, 4> in{v[base], v[base + s], v[base + 2 * s], v[base + 3 * s]};
      for (int e = 0; e < 4; ++e) {
        double acc = 0.0;
        for (int d = 0; d < 4; ++d) acc += basis[e][d] * in[d];
        v[base + e * s] = acc;
      }
    }
  }
  const std::size_t dim = std::size_t{1} << n;
  std::vector<double> grid(v.size());
  for (std::size_t x = 0; x < v.size(); ++x) {
    std::size_t row = 0, col = 0;
    for (int k = 0; k < n; ++k) {
      const int e = digit_at(x, digit_stride(n, k));
      row = (row << 1) | static_cast<std::size_t>(e >> 1);
      col = (col << 1) | static_cast<std::size_t>(e & 1);
    }
    grid[row * dim + col] = v[x];
  }
  return grid;
}

std::array<std::array<double, 3>, 3> rotation(const Vec3& axis, double angle) {
  const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  const double x = axis[0] / norm, y = axis[1] / norm, z = axis[2] / norm;
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  return {{{t * x * x + c, t * x * y - s * z, t * x * z + s * y},
           {t * x * y + s * z, t * y * y + c, t * y * z - s * x},
           {t * x * z - s * y, t * y * z + s * x, t * z * z + c}}};
}

}  // namespace

double WignerTable::total() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

double WignerTable::sum_of_squares() const {
  double s = 0.0;
  for (double w : weights) s += w * w;
  return s;
}

WignerTable wigner_odd(const CMatrix& rho) {
  const Eigen::Index d = rho.rows();
  if (rho.cols() != d || d < 1) throw InvalidArgument("density matrix must be square");
  if (d % 2 == 0) {
    throw UnsupportedDimension("even dimension " + std::to_string(d) + ": use the qubit tensor-product construction");
  }
  if (d < 3) throw UnsupportedDimension("odd dimension must be at least 3");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw InvalidState("density matrix is not Hermitian");
  if (std::abs(rho.trace() - std::complex<double>(1.0)) > 1e-12) throw InvalidState("density matrix trace is not 1");

  WignerTable out;
  out.dim = static_cast<std::size_t>(d);
  out.odd_dimension = static_cast<int>(d);
  out.weights.assign(out.dim * out.dim, 0.0);
  for (Eigen::Index n = 0; n < d; ++n) {
    for (Eigen::Index k = 0; k < d; ++k) {
      std::complex<double> acc = 0.0;
      for (Eigen::Index m = 0; m < d; ++m) {
        const Eigen::Index r = ((n - m) % d + d) % d, c = (n + m) % d;
        // 2 pi (2 k m mod d) / d keeps the phase argument small.
        const double phase = 2.0 * std::numbers::pi * static_cast<double>((2 * k * m) % d) / static_cast<double>(d);
        acc += rho(r, c) * std::polar(1.0, phase);
      }
      acc /= static_cast<double>(d);
      if (std::abs(acc.imag()) > 1e-12) throw InvalidState("Wigner entry has a non-negligible imaginary part");
      out.weights[n * d + k] = acc.real();
    }
  }
  return out;
}

WignerTable wigner_qubit(const PauliState& state, SigmaYSign sign) {
  if (state.num_qubits() != 1) throw InvalidArgument("wigner_qubit expects a single-qubit state");
  return wigner_multiqubit(state, sign);
}

WignerTable wigner_multiqubit(const PauliState& state, SigmaYSign sign) {
  const int n = state.num_qubits();
  WignerTable out;
  out.dim = std::size_t{1} << n;
  out.num_qubits = n;
  out.weights = tensor_transform(state.coeffs(), n, qubit_basis(sign, 1.0));
  return out;
}

WignerOperatorTable wigner_operator(const PauliObservable& obs, SigmaYSign sign) {
  const int n = obs.num_qubits;
  if (n < 1 || obs.coeffs.size() != pauli_dim(n)) throw InvalidArgument("malformed observable");
  WignerOperatorTable out;
  out.dim = std::size_t{1} << n;
  out.num_qubits = n;
  out.weights = tensor_transform(obs.coeffs, n, qubit_basis(sign, 2.0));
  return out;
}

double wigner_expectation(const WignerTable& w, const WignerOperatorTable& op) {
  if (w.dim != op.dim || w.weights.size() != op.weights.size()) {
    throw InvalidArgument("Wigner table and operator table shapes differ");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < w.weights.size(); ++i) s += w.weights[i] * op.weights[i];
  return s;
}

double negativity(const WignerTable& w) {
  double s = 0.0;
  for (double v : w.weights) {
    if (v < -kNegativityFloor) s -= v;
  }
  return s;
}

double sign_symmetric_negativity(const PauliState& state) {
  return std::max(negativity(wigner_multiqubit(state, SigmaYSign::plus)),
                  negativity(wigner_multiqubit(state, SigmaYSign::minus)));
}

bool octahedron_contains(const Vec3& b) {
  if (std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]) > 1.0 + 1e-12) {
    throw InvalidArgument("Bloch vector lies outside the unit ball");
  }
  return std::abs(b[0]) + std::abs(b[1]) + std::abs(b[2]) <= 1.0 + 1e-12;
}

Vec3 BlochMap::operator()(const Vec3& v) const {
  Vec3 out{};
  for (int i = 0; i < 3; ++i) out[i] = m[i][0] * v[0] + m[i][1] * v[1] + m[i][2] * v[2];
  return out;
}

std::vector<BlochMap> octahedron_symmetries() {
  using std::numbers::pi;
  const std::array<Vec3, 3> vertices{kAxisX, kAxisY, kAxisZ};
  const char* names = "xyz";
  std::vector<BlochMap> out;
  for (int a = 0; a < 3; ++a) {
    out.push_back({std::string("pauli_") + names[a], CliffordClass::pauli, rotation(vertices[a], pi)});
  }
  for (int a = 0; a < 3; ++a) {
    out.push_back({std::string("sqrt_") + names[a], CliffordClass::sqrt_pauli, rotation(vertices[a], pi / 2)});
    out.push_back({std::string("sqrt_") + names[a] + "_dg", CliffordClass::sqrt_pauli, rotation(vertices[a], -pi / 2)});
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      for (double s : {1.0, -1.0}) {
        Vec3 axis{};
        axis[a] = 1.0;
        axis[b] = s;
        const std::string name = std::string("edge_") + names[a] + (s > 0 ? "+" : "-") + names[b];
        out.push_back({name, CliffordClass::edge_rotation, rotation(axis, pi)});
      }
    }
  }
  for (double sx : {1.0, -1.0}) {
    for (double sy : {1.0, -1.0}) {
      const Vec3 axis{sx, sy, 1.0};
      const std::string base = std::string("face_") + (sx > 0 ? "+" : "-") + (sy > 0 ? "+" : "-") + "+";
      out.push_back({base + "_cw", CliffordClass::face_rotation, rotation(axis, 2 * pi / 3)});
      out.push_back({base + "_ccw", CliffordClass::face_rotation, rotation(axis, -2 * pi / 3)});
    }
  }
  out.push_back({"inversion", CliffordClass::inversion, {{{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}}}});
  return out;
}

BlochMap fourth_root_sigma_z() {
  return {"fourth_root_z", CliffordClass::non_clifford, rotation(kAxisZ, std::numbers::pi / 4)};
}

BlochMap bloch_map_of(const CMatrix& u, std::string name, CliffordClass kind) {
  if (u.rows() != 2 || u.cols() != 2) throw InvalidArgument("expected a 2x2 unitary");
  BlochMap out{std::move(name), kind, {}};
  for (int j = 0; j < 3; ++j) {
    const CMatrix image = u * pauli_matrix(j + 1) * u.adjoint();
    for (int i = 0; i < 3; ++i) out.m[i][j] = 0.5 * (pauli_matrix(i + 1) * image).trace().real();
  }
  return out;
}

bool clifford_preserves_octahedron(const BlochMap& generator, std::span<const Vec3> samples) {
  for (const Vec3& v : samples) {
    if (std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]) > 1.0 + 1e-12 || !octahedron_contains(v)) continue;
    Vec3 image = generator(v);
    const double len = std::sqrt(image[0] * image[0] + image[1] * image[1] + image[2] * image[2]);
    if (len > 1.0) {
      for (double& c : image) c /= len;
    }
    if (!octahedron_contains(image)) return false;
    if (sign_symmetric_negativity(from_bloch(image)) > 1e-12) return false;
  }
  return true;
}

}  // namespace paulisim
