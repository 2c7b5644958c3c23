#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "paulisim/kraus.hpp"
#include "paulisim/pauli_state.hpp"

namespace paulisim {

// Sign attached to the sigma_y basis table in the qubit construction.
enum class SigmaYSign { plus, minus };

// Square real grid, row-major. Qubit tables have 2^n rows; the row index
// collects the per-qubit row bits and the column index the column bits, qubit 0
// most significant in both.
struct WignerTable {
  std::size_t dim = 0;
  int odd_dimension = 0;  // d for odd-d tables, 0 for qubit tables
  int num_qubits = 0;     // qubit tables only
  std::vector<double> weights;

  double operator()(std::size_t row, std::size_t col) const { return weights[row * dim + col]; }
  double total() const;
  double sum_of_squares() const;
};

// Same layout as WignerTable, normalized so that the identity is all ones.
struct WignerOperatorTable {
  std::size_t dim = 0;
  int num_qubits = 0;
  std::vector<double> weights;

  double operator()(std::size_t row, std::size_t col) const { return weights[row * dim + col]; }
};

// W(n,k) = (1/d) sum_m rho_{n-m,n+m} exp(4 pi i k m / d), indices mod d.
// Throws UnsupportedDimension for even d, InvalidState for a non-Hermitian or
// non-unit-trace rho.
WignerTable wigner_odd(const CMatrix& rho);

// Single qubit. W = sum_i a_i T_i with
//   T_0 = 1/2 [[1, 1], [1, 1]]    T_x = 1/2 [[1, -1], [1, -1]]
//   T_y = +-1/2 [[1, -1], [-1, 1]] T_z = 1/2 [[1, 1], [-1, -1]].
WignerTable wigner_qubit(const PauliState& state, SigmaYSign sign = SigmaYSign::plus);
// Tensor product of the per-qubit tables applied to all 4^n coefficients.
WignerTable wigner_multiqubit(const PauliState& state, SigmaYSign sign = SigmaYSign::plus);

// Operator table built from 2 T_i per factor.
WignerOperatorTable wigner_operator(const PauliObservable& obs, SigmaYSign sign = SigmaYSign::plus);

// sum_ij W(i,j) O(i,j). Throws InvalidArgument on a shape mismatch.
double wigner_expectation(const WignerTable& w, const WignerOperatorTable& op);

// Sum of -w over entries below -1e-14; rounding residue above that counts as zero.
double negativity(const WignerTable& w);
// Larger negativity of the two sign branches. Zero exactly on states whose
// tables are non-negative under both choices of the sigma_y sign.
double sign_symmetric_negativity(const PauliState& state);

// |x| + |y| + |z| <= 1 + 1e-12. Throws InvalidArgument if |bloch| > 1 + 1e-12.
bool octahedron_contains(const Vec3& bloch);

enum class CliffordClass { pauli, sqrt_pauli, edge_rotation, face_rotation, inversion, non_clifford };

// Linear action on the Bloch vector.
struct BlochMap {
  std::string name;
  CliffordClass kind = CliffordClass::pauli;
  std::array<std::array<double, 3>, 3> m{};

  Vec3 operator()(const Vec3& v) const;
};

// Every single-qubit octahedral symmetry, grouped by class: pi rotations about
// vertex axes, +-pi/2 vertex rotations, pi rotations about edge axes,
// +-2pi/3 rotations about face axes, and the inversion.
std::vector<BlochMap> octahedron_symmetries();
// pi/4 rotation about z (fourth root of sigma_z).
BlochMap fourth_root_sigma_z();
// Bloch map of a single-qubit unitary, u sigma u^dagger.
BlochMap bloch_map_of(const CMatrix& u, std::string name, CliffordClass kind);

// True if every sample inside the octahedron maps inside it and keeps zero
// sign-symmetric negativity. Samples outside the octahedron are skipped.
bool clifford_preserves_octahedron(const BlochMap& generator, std::span<const Vec3> samples);

}  // namespace paulisim
