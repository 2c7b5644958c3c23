#pragma once

// Dense 2^n x 2^n reference implementation: states are full complex matrices
// and operators are embedded explicitly. Shares only the Kraus definitions in
// kraus.hpp with the Pauli-basis pipeline.

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

#include "paulisim/channels.hpp"
#include "paulisim/circuit.hpp"
#include "paulisim/kraus.hpp"
#include "paulisim/pauli_state.hpp"

namespace paulisim::oracle {

inline constexpr int kMaxQubits = 8;

struct DenseState {
  int num_qubits = 0;
  CMatrix rho;

  // Hermitian and unit trace within 1e-12, eigenvalues >= -1e-10.
  bool is_valid() const;
};

DenseState pure_state(const Eigen::VectorXcd& psi);

DenseState from_pauli(const PauliState& state);
// Throws InvalidState when the input is not Hermitian (imaginary residue of a
// coefficient above 1e-10).
PauliState to_pauli(const DenseState& dense);

// Embeds a 2^k x 2^k operator acting on `targets` (first target = leading
// factor) into the full n-qubit space.
CMatrix embed(const CMatrix& op, std::span<const int> targets, int n);

// Throws InvalidArgument if u is not unitary within 1e-10.
DenseState evolve_unitary(const DenseState& d, const CMatrix& u, std::span<const int> targets);
// Throws InvalidChannel if the set is incomplete.
DenseState evolve_kraus(const DenseState& d, const KrausSet& kraus, std::span<const int> targets);
// Applies an arbitrary (possibly trace-decreasing) list of operators.
DenseState apply_operators(const DenseState& d, std::span<const CMatrix> ops, std::span<const int> targets);

DenseState partial_trace(const DenseState& d, std::span<const int> keep);
std::complex<double> trace_product(const DenseState& d, const CMatrix& op);
double purity(const DenseState& d);
// Ascending eigenvalues of the reduced state on `keep`.
std::vector<double> reduced_spectrum(const DenseState& d, std::span<const int> keep);
// Hilbert-Schmidt distance Tr((rho1 - rho2)^2).
double hs_distance(const DenseState& a, const DenseState& b);

// Choi matrix sum_ij |i><j| x E(|i><j|).
CMatrix choi_matrix(const KrausSet& kraus);
CMatrix choi_matrix(const Ptm& ptm);
double choi_min_eigenvalue(const CMatrix& choi);
bool choi_positive(const KrausSet& kraus);
bool choi_positive(const Ptm& ptm);

struct SchmidtDecomposition {
  std::vector<double> coefficients;  // sqrt(p_i), descending, nonzero only
  CMatrix basis_a;                   // columns |i_A>
  CMatrix basis_b;                   // columns |i_B>
  int rank = 0;
  int dim_a = 0;
  int dim_b = 0;
};

// Schmidt decomposition of a normalized pure state across `partition` | rest.
// The amplitude index is reordered so that partition qubits lead.
SchmidtDecomposition schmidt_decompose(const Eigen::VectorXcd& psi, std::span<const int> partition);
// Reorders amplitudes so that partition qubits become the leading bits.
Eigen::VectorXcd reorder_leading(const Eigen::VectorXcd& psi, std::span<const int> partition);

// Executes a schedule with dense Kraus conjugation: every gate and measurement
// through its Kraus set, then decoherence and decay on every qubit after each
// partition. Measurements are nonselective.
DenseState run_schedule(const Schedule& schedule, const NoiseModel& noise, DenseState initial);

DenseState thermal_state(int n, double p);

}  // namespace paulisim::oracle
