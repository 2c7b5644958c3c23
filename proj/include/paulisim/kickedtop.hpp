#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "paulisim/channels.hpp"
#include "paulisim/circuit.hpp"
#include "paulisim/kraus.hpp"
#include "paulisim/pauli_state.hpp"

namespace paulisim::kickedtop {

struct TopParams {
  int two_j = 1;  // 2J, so J = two_j / 2
  double kappa = 0.0;
  double p = std::numbers::pi / 2;

  double j() const { return 0.5 * two_j; }
  // Throws InvalidArgument: two_j >= 1, kappa >= 0, finite p.
  void validate() const;
};

// Spin operators in the |J, m> basis. Index k counts the excitations, so
// m = J - k and k = 0 is the highest weight state |0...0>.
CMatrix spin_x(int two_j);
CMatrix spin_y(int two_j);
CMatrix spin_z(int two_j);

// exp(-i kappa Jz^2 / (2J)) exp(-i p Jy), built once.
class FloquetMap {
 public:
  explicit FloquetMap(const TopParams& params);

  const TopParams& params() const { return params_; }
  const CMatrix& unitary() const { return u_; }
  // Throws InvalidState if |state| differs from 1 by more than 1e-10.
  Eigen::VectorXcd step(const Eigen::VectorXcd& state) const;
  Eigen::VectorXcd evolve(Eigen::VectorXcd state, std::size_t steps) const;

 private:
  TopParams params_;
  CMatrix u_;
};

Eigen::VectorXcd floquet_step(const Eigen::VectorXcd& state, const TopParams& params);

// Dicke amplitudes sqrt(C(2J,k)) cos(theta/2)^(2J-k) (e^{i phi} sin(theta/2))^k.
Eigen::VectorXcd coherent_state(int two_j, double theta, double phi);
// The same state as a 2J-fold product of identical qubits.
PauliState coherent_qubits(int two_j, double theta, double phi);
// Embeds a symmetric-subspace vector into 2J qubits (qubit 0 most significant).
Eigen::VectorXcd symmetric_to_qubits(const Eigen::VectorXcd& v);
// (<Jx>, <Jy>, <Jz>) / J.
Vec3 spin_direction(const Eigen::VectorXcd& state);

// Large-J limit of one kick: rotate by p about y, then twist about z by kappa z.
Vec3 classical_map(const Vec3& point, const TopParams& params);

struct LyapunovEstimate {
  double exponent = 0.0;
  std::size_t steps = 0;
};

// Tangent-vector growth rate along the classical orbit, renormalizing every
// `renorm_interval` steps. Throws InvalidArgument if steps < 100.
LyapunovEstimate lyapunov_estimate(const TopParams& params, const Vec3& point, std::size_t steps,
                                   std::size_t renorm_interval = 1);

// Real parts of the eigenvalues of a 2x2 linearization, descending.
std::pair<double, double> linear_lyapunov(const Eigen::Matrix2d& m);

struct DataPoint {
  double theta = 0.0;
  double phi = 0.0;
  int label = 0;         // +1 northern, -1 southern (and equator)
  bool equator = false;  // |cos theta| < 1e-12
  bool train = false;
  PauliState state;      // evolved state on 2J qubits
};

struct Dataset {
  TopParams params;
  std::size_t steps = 0;
  int grid_theta = 0;
  int grid_phi = 0;
  std::uint64_t seed = 0;
  std::vector<DataPoint> points;

  std::vector<std::size_t> train_indices() const;
  std::vector<std::size_t> validation_indices() const;
};

// Grid theta_i = (i + 1/2) pi / grid_theta, phi_j = 2 pi j / grid_phi. Each
// coherent state is evolved `steps` kicks; round(train_fraction * N) points,
// chosen by the seeded shuffle, form the training split.
Dataset generate_dataset(const TopParams& params, std::size_t steps, int grid_theta, int grid_phi,
                         double train_fraction, std::uint64_t seed);

// Layers of [RY on every qubit, C-NOT ring, RZ on every qubit]. Parameters are
// stored layer by layer, RY angles first.
struct ClassifierSpec {
  int qubits = 2;
  int layers = 2;

  std::size_t parameter_count() const { return static_cast<std::size_t>(2 * qubits * layers); }
};

// C-NOTs (q, q+1) for even q, then odd q, then (n-1, 0) closing the ring.
void append_cnot_ring(Circuit& circuit);
Circuit classifier_circuit(const ClassifierSpec& spec, std::span<const double> parameters);

// <sigma_z> on qubit 0 after the noiseless classifier circuit.
double classifier_output(const ClassifierSpec& spec, const PauliState& state, std::span<const double> parameters);
// +1 if the output is positive, -1 otherwise.
int classify(const ClassifierSpec& spec, const PauliState& state, std::span<const double> parameters);

// Fraction of `indices` classified correctly.
double accuracy(const ClassifierSpec& spec, const Dataset& data, std::span<const std::size_t> indices,
                std::span<const double> parameters);

struct TrainConfig {
  std::uint64_t seed = 1;
  int restarts = 6;
  std::size_t max_evaluations = 3000;
  // Coordinate-descent step sizes, tried in order.
  std::vector<double> steps{std::numbers::pi / 2, std::numbers::pi / 4, std::numbers::pi / 8, std::numbers::pi / 16};
};

struct TrainResult {
  std::vector<double> parameters;
  double train_accuracy = 0.0;
  std::vector<double> history;  // best-so-far training accuracy per evaluation
  std::size_t evaluations = 0;
};

// Random restarts plus coordinate descent maximizing training accuracy, mean
// margin label * output breaking ties. Throws InvalidArgument on an empty
// training split or a spec that does not match the dataset.
TrainResult train(const ClassifierSpec& spec, const Dataset& data, const TrainConfig& config);

// Uniform parameters in [-pi, pi).
std::vector<double> random_parameters(const ClassifierSpec& spec, std::uint64_t seed);

}  // namespace paulisim::kickedtop
