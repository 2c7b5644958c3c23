#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace paulisim {

using Vec3 = std::array<double, 3>;

inline constexpr Vec3 kAxisX{1.0, 0.0, 0.0};
inline constexpr Vec3 kAxisY{0.0, 1.0, 0.0};
inline constexpr Vec3 kAxisZ{0.0, 0.0, 1.0};

// Coefficient layout helpers. A multi-index (i_0 ... i_{n-1}), i_k in {0,1,2,3}
// for {I, X, Y, Z}, is stored at sum_k i_k 4^(n-1-k): qubit 0 is the most
// significant base-4 digit, so tensor products concatenate digit strings.
inline std::size_t pauli_dim(int n) { return std::size_t{1} << (2 * n); }
inline std::size_t digit_stride(int n, int k) { return std::size_t{1} << (2 * (n - 1 - k)); }
inline int digit_at(std::size_t index, std::size_t stride) { return static_cast<int>((index / stride) & 3u); }

// "XIZ" style label for a coefficient index (qubit 0 first).
std::string pauli_label(std::size_t index, int n);
// Inverse of pauli_label; accepts I/X/Y/Z in either case.
std::size_t pauli_index(std::string_view label);

// n-qubit density matrix rho = sum a_{i...} sigma_{i_0} x ... x sigma_{i_{n-1}},
// stored as the 4^n real coefficients a (unscaled). a_{0...0} = 2^-n.
class PauliState {
 public:
  // Validates the size (4^n) and the trace slot (2^-n within 1e-12).
  PauliState(int num_qubits, std::vector<double> coeffs);

  int num_qubits() const { return n_; }
  std::size_t size() const { return coeffs_.size(); }
  std::span<const double> coeffs() const { return coeffs_; }
  double operator[](std::size_t index) const { return coeffs_[index]; }

  // Raw access for in-place channel application. Callers must keep coeffs[0]
  // untouched (trace preservation) or restore it.
  std::span<double> mutable_coeffs() { return coeffs_; }

  // Tr(rho^2) = 2^n sum a^2.
  double purity() const;
  // <sigma> for the single-qubit reduced state of qubit k: 2^n * a at digit k.
  Vec3 bloch_vector(int k) const;

 private:
  int n_;
  std::vector<double> coeffs_;
};

// O = sum_i o_i sigma_i (the identity observable has o_0 = 1).
struct PauliObservable {
  int num_qubits = 0;
  std::vector<double> coeffs;

  static PauliObservable identity(int n);
  // Single Pauli string such as "ZZI"; qubit 0 is the first character.
  static PauliObservable from_string(std::string_view label);
  // (sigma . axis) on qubit k, identity elsewhere.
  static PauliObservable spin_along(int n, int k, const Vec3& axis);
  // Tensor product of two observables (lhs occupies the leading qubits).
  static PauliObservable tensor(const PauliObservable& lhs, const PauliObservable& rhs);
};

PauliState init_pure_zero(int n);
// Product of diag(p, 1-p) per qubit.
PauliState init_thermal(int n, double p);
// Pauli coefficients of |psi><psi| for a normalized 2^n amplitude vector
// (qubit 0 is the most significant bit of the amplitude index).
PauliState from_statevector(std::span<const std::complex<double>> psi);
// Single-qubit state (I + b.sigma)/2 for a Bloch vector |b| <= 1.
PauliState from_bloch(const Vec3& bloch);
PauliState tensor(const PauliState& lhs, const PauliState& rhs);

// Tr(rho O) = 2^n sum a_i o_i.
double expectation(const PauliState& state, const PauliObservable& obs);
// Tr((rho1 - rho2)^2) = 2^n sum (a - b)^2.
double hs_distance(const PauliState& s1, const PauliState& s2);

// Reduced state on the strictly increasing qubit subset `keep`.
PauliState partial_trace(const PauliState& state, std::span<const int> keep);

struct QubitMeasurement {
  std::array<double, 2> probabilities;  // (p+, p-)
  PauliState state;
};

// Projective measurement of sigma.axis on qubit k, modelled with readout
// fidelity d1. Without an outcome the update is nonselective; with outcome
// +1 or -1 the state is collapsed onto that record and renormalized.
QubitMeasurement measure_qubit(const PauliState& state, int k, const Vec3& axis, double d1,
                               std::optional<int> outcome = std::nullopt);

enum class BellOutcome : int { phi_plus = 0, phi_minus = 1, psi_plus = 2, psi_minus = 3 };

// Signs of <XX>, <YY>, <ZZ> for each Bell state, indexed by BellOutcome.
inline constexpr std::array<std::array<int, 3>, 4> kBellSigns{{
    {+1, -1, +1},  // phi+
    {-1, +1, +1},  // phi-
    {+1, +1, -1},  // psi+
    {-1, -1, -1},  // psi-
}};

struct BellMeasurement {
  std::array<double, 4> probabilities;  // (phi+, phi-, psi+, psi-)
  PauliState state;
};

BellMeasurement measure_bell(const PauliState& state, int k, int l, double d2,
                             std::optional<BellOutcome> outcome = std::nullopt);

// Entanglement entropy -sum p log p (natural log) of a pure state across
// `partition` | rest. Throws NotPure if |purity - 1| > 1e-8.
double schmidt_entropy(const PauliState& state, std::span<const int> partition);

}  // namespace paulisim
