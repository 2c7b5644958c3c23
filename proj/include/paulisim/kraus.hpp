#pragma once

// Kraus-operator definitions of every channel the simulator uses. These are the
// only channel definitions shared between the Pauli-basis pipeline and the
// dense reference in oracle.hpp.

#include <Eigen/Dense>

#include <optional>
#include <vector>

#include "paulisim/pauli_state.hpp"

namespace paulisim {

using CMatrix = Eigen::MatrixXcd;

enum class Axis { x, y, z };

Vec3 axis_vector(Axis axis);

// Sum_mu M_mu rho M_mu^dagger on `arity` qubits (1 or 2).
struct KrausSet {
  int arity = 1;
  std::vector<CMatrix> ops;

  // Validates dimensions and completeness sum M^dagger M = I within 1e-12;
  // throws InvalidChannel otherwise.
  static KrausSet make(int arity, std::vector<CMatrix> ops);
  // Residual of the completeness relation, max-abs entry.
  double completeness_error() const;
  // Residual of sum M M^dagger = I (zero for unital channels).
  double unitality_error() const;
};

// sigma_0..sigma_3.
const CMatrix& pauli_matrix(int index);
// Tensor-product Pauli string for a coefficient index on n qubits.
CMatrix pauli_string_matrix(std::size_t index, int n);

CMatrix hadamard_matrix();
// exp(-i angle sigma_axis / 2).
CMatrix rotation_matrix(Axis axis, double angle);
// |0><0| x I + |1><1| x (sigma_x exp(-i alpha sigma_x / 2)); equals the C-NOT
// at alpha = 0. Control is the first tensor factor.
CMatrix cnot_pulse_matrix(double alpha);

// Spread of the symmetric two-point angle distribution whose mean contraction
// <cos(alpha - alpha_bar)> equals r: delta = arccos(r).
double angle_spread(double r);

KrausSet unitary_kraus(const CMatrix& u);
KrausSet hadamard_kraus();
// Equal mixture of rotations by theta + alpha_bar +- angle_spread(r).
KrausSet noisy_rotation_kraus(Axis axis, double theta, double alpha_bar, double r);
// Equal mixture of C-NOT pulses with errors alpha_bar +- angle_spread(r).
KrausSet noisy_cnot_kraus(double alpha_bar, double r);
// sqrt((1+f)/2) I, sqrt((1-f)/2) sigma_z.
KrausSet decoherence_kraus(double f);
// Generalized amplitude damping towards diag(p, 1-p) with factor g.
KrausSet decay_kraus(double p, double g);
KrausSet identity_kraus(int arity);

// Measure-and-prepare instrument for sigma.axis with readout fidelity d1:
// record s has effect E_s = (I + s d1 n.sigma)/2 and prepares (I + s n.sigma)/2.
// With an outcome, returns that (trace-decreasing) branch; otherwise the
// full nonselective channel.
std::vector<CMatrix> qubit_measurement_kraus(const Vec3& axis, double d1,
                                             std::optional<int> outcome = std::nullopt);
// Bell-basis analogue with fidelity d2; outcome indexes kBellSigns.
std::vector<CMatrix> bell_measurement_kraus(double d2, std::optional<int> outcome = std::nullopt);
// Bell state vector for an outcome index (phi+, phi-, psi+, psi-).
Eigen::Vector4cd bell_vector(int outcome);

}  // namespace paulisim
