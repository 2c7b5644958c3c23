#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <tuple>
#include <vector>

#include "paulisim/kraus.hpp"
#include "paulisim/pauli_state.hpp"

namespace paulisim {

// Pauli transfer matrix of a one- or two-qubit channel:
// R[i][j] = 2^-m Tr(sigma_i E(sigma_j)). It acts on the coefficient block of
// the addressed qubits; for two qubits the first target is the leading digit.
class Ptm {
 public:
  // Checks the shape (4^m square) and that the first row is (1, 0, ..., 0)
  // within 1e-10, then stores that row exactly. Throws InvalidChannel.
  Ptm(int arity, Eigen::MatrixXd mat);

  int arity() const { return arity_; }
  const Eigen::MatrixXd& matrix() const { return mat_; }
  double operator()(int row, int col) const { return mat_(row, col); }

  static Ptm identity(int arity);
  // Channel composition: (this after first).
  Ptm after(const Ptm& first) const;

 private:
  int arity_;
  Eigen::MatrixXd mat_;
};

// User-facing error parameters, one clock step worth of memory noise.
struct NoiseModel {
  double p = 1.0;             // thermal population of |0>
  double alpha_bar = 0.0;     // mean rotation-angle error (radians)
  double r = 1.0;             // <cos(alpha - alpha_bar)> for rotations
  double alpha_bar_cx = 0.0;  // mean C-NOT pulse error
  double r_cx = 1.0;
  double d1 = 1.0;  // single-qubit readout fidelity
  double d2 = 1.0;  // Bell readout fidelity
  double f = 1.0;   // exp(-dt/T2)
  double g = 1.0;   // exp(-dt/T1)

  // Throws InvalidArgument on non-finite values or probabilities outside [0,1].
  void validate() const;
  bool memory_is_identity() const { return f == 1.0 && g == 1.0; }
};

Ptm kraus_to_ptm(const KrausSet& kraus);

// Applies the PTM to the coefficient blocks of `targets` (one or two distinct
// qubits, matching the PTM arity).
PauliState apply_ptm(PauliState state, std::span<const int> targets, const Ptm& ptm);

Ptm hadamard_ptm();
// Rotation about `axis` by theta, with the substitutions
// cos -> r cos(theta + alpha_bar), sin -> r sin(theta + alpha_bar).
Ptm noisy_rotation_ptm(Axis axis, double theta, double alpha_bar, double r);
// Noisy C-NOT (control = first target); exact C-NOT at alpha_bar = 0, r = 1.
Ptm noisy_cnot_ptm(double alpha_bar_cx, double r_cx);
Ptm decoherence_ptm(double f);
Ptm decay_ptm(double p, double g);
// Decoherence and decay composed (they commute).
Ptm memory_ptm(const NoiseModel& noise);

// Decoherence + decay on every qubit.
PauliState memory_step(PauliState state, const NoiseModel& noise);

struct PovmResult {
  std::vector<double> probabilities;
  PauliState state;  // nonselective post-measurement state
};

// POVM with effects on `targets`; effects must be positive and sum to I
// (within 1e-10), otherwise InvalidPovm.
PovmResult apply_povm(const PauliState& state, std::span<const int> targets,
                      std::span<const CMatrix> effects);

// Transfer matrices keyed by gate and parameters rounded to 12 decimals.
// Thread safe; returned references stay valid for the cache lifetime.
class PtmCache {
 public:
  const Ptm& rotation(Axis axis, double theta, double alpha_bar, double r);
  const Ptm& cnot(double alpha_bar_cx, double r_cx);
  std::size_t size() const;

 private:
  using Key = std::tuple<int, std::int64_t, std::int64_t, std::int64_t>;
  const Ptm& lookup(const Key& key, const std::function<Ptm()>& build);

  mutable std::mutex mutex_;
  std::map<Key, std::unique_ptr<Ptm>> entries_;
};

}  // namespace paulisim
