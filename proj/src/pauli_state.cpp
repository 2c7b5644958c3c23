#include "paulisim/pauli_state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "paulisim/detail/strata.hpp"
#include "paulisim/errors.hpp"
#include "paulisim/oracle.hpp"

namespace paulisim {

namespace {

constexpr double kTraceTolerance = 1e-12;
constexpr double kImpossibleProbability = 1e-14;

void require_qubit(int n, int k) {
  if (k < 0 || k >= n) {
    throw InvalidArgument("qubit index " + std::to_string(k) + " out of range for " +
                          std::to_string(n) + " qubits");
  }
}

void require_same_size(int n1, int n2) {
  if (n1 != n2) {
    throw InvalidArgument("qubit count mismatch: " + std::to_string(n1) + " vs " + std::to_string(n2));
  }
}

void require_subset(std::span<const int> subset, int n) {
  if (subset.empty()) throw InvalidArgument("qubit subset must not be empty");
  for (std::size_t i = 0; i < subset.size(); ++i) {
    require_qubit(n, subset[i]);
    if (i > 0 && subset[i] <= subset[i - 1]) {
      throw InvalidArgument("qubit subset must be strictly increasing");
    }
  }
}

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

std::string pauli_label(std::size_t index, int n) {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  std::string label(static_cast<std::size_t>(n), 'I');
  for (int k = 0; k < n; ++k) label[k] = kLetters[digit_at(index, digit_stride(n, k))];
  return label;
}

std::size_t pauli_index(std::string_view label) {
  if (label.empty()) throw InvalidArgument("empty Pauli string");
  std::size_t index = 0;
  for (char c : label) {
    int d = 0;
    switch (c) {
      case 'I': case 'i': d = 0; break;
      case 'X': case 'x': d = 1; break;
      case 'Y': case 'y': d = 2; break;
      case 'Z': case 'z': d = 3; break;
      default:
        throw InvalidArgument(std::string("invalid Pauli letter '") + c + "'");
    }
    index = index * 4 + static_cast<std::size_t>(d);
  }
  return index;
}

PauliState::PauliState(int num_qubits, std::vector<double> coeffs) : n_(num_qubits), coeffs_(std::move(coeffs)) {
  if (n_ < 1 || n_ > 15) throw InvalidArgument("qubit count must be in [1, 15]");
  if (coeffs_.size() != pauli_dim(n_)) {
    throw InvalidArgument("expected " + std::to_string(pauli_dim(n_)) + " coefficients, got " +
                          std::to_string(coeffs_.size()));
  }
  for (double c : coeffs_) {
    if (!std::isfinite(c)) throw InvalidState("non-finite Pauli coefficient");
  }
  const double trace_slot = std::ldexp(1.0, -n_);
  if (std::abs(coeffs_[0] - trace_slot) > kTraceTolerance) {
    throw InvalidState("identity coefficient must equal 2^-n");
  }
}

double PauliState::purity() const {
  const double sum_sq = std::transform_reduce(coeffs_.begin(), coeffs_.end(), 0.0, std::plus<>(),
                                              [](double c) { return c * c; });
  return std::ldexp(sum_sq, n_);
}

Vec3 PauliState::bloch_vector(int k) const {
  require_qubit(n_, k);
  const std::size_t stride = digit_stride(n_, k);
  return {std::ldexp(coeffs_[stride], n_), std::ldexp(coeffs_[2 * stride], n_),
          std::ldexp(coeffs_[3 * stride], n_)};
}

PauliObservable PauliObservable::identity(int n) {
  if (n < 1) throw InvalidArgument("qubit count must be >= 1");
  PauliObservable obs{n, std::vector<double>(pauli_dim(n), 0.0)};
  obs.coeffs[0] = 1.0;
  return obs;
}

PauliObservable PauliObservable::from_string(std::string_view label) {
  const std::size_t index = pauli_index(label);
  const int n = static_cast<int>(label.size());
  PauliObservable obs{n, std::vector<double>(pauli_dim(n), 0.0)};
  obs.coeffs[index] = 1.0;
  return obs;
}

PauliObservable PauliObservable::spin_along(int n, int k, const Vec3& axis) {
  require_qubit(n, k);
  PauliObservable obs{n, std::vector<double>(pauli_dim(n), 0.0)};
  const std::size_t stride = digit_stride(n, k);
  for (int a = 0; a < 3; ++a) obs.coeffs[(a + 1) * stride] = axis[a];
  return obs;
}

PauliObservable PauliObservable::tensor(const PauliObservable& lhs, const PauliObservable& rhs) {
  PauliObservable out{lhs.num_qubits + rhs.num_qubits,
                      std::vector<double>(lhs.coeffs.size() * rhs.coeffs.size(), 0.0)};
  for (std::size_t i = 0; i < lhs.coeffs.size(); ++i) {
    if (lhs.coeffs[i] == 0.0) continue;
    for (std::size_t j = 0; j < rhs.coeffs.size(); ++j) {
      out.coeffs[i * rhs.coeffs.size() + j] = lhs.coeffs[i] * rhs.coeffs[j];
    }
  }
  return out;
}

PauliState init_pure_zero(int n) { return init_thermal(n, 1.0); }

PauliState init_thermal(int n, double p) {
  if (n < 1) throw InvalidArgument("qubit count must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("thermal population must lie in [0, 1]");
  std::vector<double> coeffs(pauli_dim(n), 0.0);
  const double z = (2.0 * p - 1.0) / 2.0;
  for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
    double value = 1.0;
    for (int k = 0; k < n && value != 0.0; ++k) {
      const int d = digit_at(idx, digit_stride(n, k));
      value *= d == 0 ? 0.5 : (d == 3 ? z : 0.0);
    }
    coeffs[idx] = value;
  }
  return PauliState(n, std::move(coeffs));
}

PauliState from_statevector(std::span<const std::complex<double>> psi) {
  const std::size_t dim = psi.size();
  if (dim < 2 || !std::has_single_bit(dim)) throw InvalidArgument("state vector length must be 2^n, n >= 1");
  const int n = std::countr_zero(dim);
  double norm = 0.0;
  for (const auto& amp : psi) norm += std::norm(amp);
  if (std::abs(norm - 1.0) > 1e-10) throw InvalidState("state vector is not normalized");

  std::vector<double> coeffs(pauli_dim(n), 0.0);
  const double scale = std::ldexp(1.0, -n);
  for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
    // sigma-string |b> = i^{#Y} (-1)^{popcount(b & zmask)} |b ^ xmask>.
    std::size_t xmask = 0, zmask = 0;
    int num_y = 0;
    for (int k = 0; k < n; ++k) {
      const int d = digit_at(idx, digit_stride(n, k));
      const std::size_t bit = std::size_t{1} << (n - 1 - k);
      if (d == 1 || d == 2) xmask |= bit;
      if (d == 2 || d == 3) zmask |= bit;
      if (d == 2) ++num_y;
    }
    std::complex<double> acc = 0.0;
    for (std::size_t b = 0; b < dim; ++b) {
      const double sign = (std::popcount(b & zmask) & 1) ? -1.0 : 1.0;
      acc += std::conj(psi[b ^ xmask]) * psi[b] * sign;
    }
    static constexpr std::complex<double> kIPowers[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    acc *= kIPowers[num_y % 4];
    coeffs[idx] = acc.real() * scale;
  }
  coeffs[0] = scale;
  return PauliState(n, std::move(coeffs));
}

PauliState from_bloch(const Vec3& bloch) {
  const double len = std::sqrt(bloch[0] * bloch[0] + bloch[1] * bloch[1] + bloch[2] * bloch[2]);
  if (len > 1.0 + 1e-12) throw InvalidArgument("Bloch vector longer than 1");
  return PauliState(1, {0.5, bloch[0] / 2, bloch[1] / 2, bloch[2] / 2});
}

PauliState tensor(const PauliState& lhs, const PauliState& rhs) {
  std::vector<double> coeffs(lhs.size() * rhs.size());
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    for (std::size_t j = 0; j < rhs.size(); ++j) coeffs[i * rhs.size() + j] = lhs[i] * rhs[j];
  }
  return PauliState(lhs.num_qubits() + rhs.num_qubits(), std::move(coeffs));
}

double expectation(const PauliState& state, const PauliObservable& obs) {
  require_same_size(state.num_qubits(), obs.num_qubits);
  if (obs.coeffs.size() != state.size()) throw InvalidArgument("observable coefficient count mismatch");
  const auto a = state.coeffs();
  const double dot = std::transform_reduce(a.begin(), a.end(), obs.coeffs.begin(), 0.0);
  return std::ldexp(dot, state.num_qubits());
}

double hs_distance(const PauliState& s1, const PauliState& s2) {
  require_same_size(s1.num_qubits(), s2.num_qubits());
  double sum = 0.0;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    const double d = s1[i] - s2[i];
    sum += d * d;
  }
  return std::ldexp(sum, s1.num_qubits());
}

PauliState partial_trace(const PauliState& state, std::span<const int> keep) {
  const int n = state.num_qubits();
  require_subset(keep, n);
  const int m = static_cast<int>(keep.size());
  std::vector<double> out(pauli_dim(m));
  const double factor = std::ldexp(1.0, n - m);
  for (std::size_t j = 0; j < out.size(); ++j) {
    std::size_t src = 0;
    for (int q = 0; q < m; ++q) {
      src += static_cast<std::size_t>(digit_at(j, digit_stride(m, q))) * digit_stride(n, keep[q]);
    }
    out[j] = factor * state[src];
  }
  out[0] = std::ldexp(1.0, -m);
  return PauliState(m, std::move(out));
}

QubitMeasurement measure_qubit(const PauliState& state, int k, const Vec3& axis, double d1,
                               std::optional<int> outcome) {
  const int n = state.num_qubits();
  require_qubit(n, k);
  const double axis_len = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
  if (std::abs(axis_len - 1.0) > 1e-9) throw InvalidArgument("measurement axis must be a unit vector");
  if (!(d1 >= 0.0 && d1 <= 1.0)) throw InvalidArgument("measurement fidelity d1 must lie in [0, 1]");
  if (outcome && *outcome != 1 && *outcome != -1) throw InvalidArgument("qubit outcome must be +1 or -1");

  const std::size_t stride = digit_stride(n, k);
  const double parallel0 = axis[0] * state[stride] + axis[1] * state[2 * stride] + axis[2] * state[3 * stride];
  const double bias = std::ldexp(d1 * parallel0, n);
  const std::array<double, 2> probs{clamp_probability(0.5 * (1.0 + bias)), clamp_probability(0.5 * (1.0 - bias))};

  PauliState out = state;
  auto c = out.mutable_coeffs();
  const std::size_t outer = pauli_dim(k);
  if (!outcome) {
    for (std::size_t hi = 0; hi < outer; ++hi) {
      for (std::size_t lo = 0; lo < stride; ++lo) {
        const std::size_t base = hi * 4 * stride + lo;
        const double par = axis[0] * c[base + stride] + axis[1] * c[base + 2 * stride] + axis[2] * c[base + 3 * stride];
        for (int a = 0; a < 3; ++a) c[base + (a + 1) * stride] = d1 * par * axis[a];
      }
    }
    return {probs, std::move(out)};
  }

  const double s = static_cast<double>(*outcome);
  const double p_s = *outcome == 1 ? probs[0] : probs[1];
  if (p_s < kImpossibleProbability) throw ImpossibleOutcome("measurement outcome has zero probability");
  const double inv = 1.0 / p_s;
  for (std::size_t hi = 0; hi < outer; ++hi) {
    for (std::size_t lo = 0; lo < stride; ++lo) {
      const std::size_t base = hi * 4 * stride + lo;
      const double par = axis[0] * c[base + stride] + axis[1] * c[base + 2 * stride] + axis[2] * c[base + 3 * stride];
      const double w = 0.5 * (c[base] + s * d1 * par);
      c[base] = w;
      for (int a = 0; a < 3; ++a) c[base + (a + 1) * stride] = s * w * axis[a];
    }
  }
  for (auto& v : c) v *= inv;
  c[0] = std::ldexp(1.0, -n);
  return {probs, std::move(out)};
}

BellMeasurement measure_bell(const PauliState& state, int k, int l, double d2, std::optional<BellOutcome> outcome) {
  const int n = state.num_qubits();
  require_qubit(n, k);
  require_qubit(n, l);
  if (k == l) throw InvalidArgument("Bell measurement needs two distinct qubits");
  if (!(d2 >= 0.0 && d2 <= 1.0)) throw InvalidArgument("measurement fidelity d2 must lie in [0, 1]");

  const std::size_t sk = digit_stride(n, k);
  const std::size_t sl = digit_stride(n, l);
  std::array<double, 3> corr{};  // <XX>, <YY>, <ZZ>
  for (int j = 0; j < 3; ++j) corr[j] = std::ldexp(state[(j + 1) * (sk + sl)], n);

  std::array<double, 4> probs{};
  for (int b = 0; b < 4; ++b) {
    double acc = 1.0;
    for (int j = 0; j < 3; ++j) acc += d2 * kBellSigns[b][j] * corr[j];
    probs[b] = clamp_probability(0.25 * acc);
  }

  PauliState out = state;
  auto c = out.mutable_coeffs();
  const std::size_t strata = pauli_dim(n - 2);

  if (!outcome) {
    for (std::size_t r = 0; r < strata; ++r) {
      const std::size_t base = detail::stratum_base(r, sk, sl);
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          if (i == 0 && j == 0) continue;
          double& v = c[base + i * sk + j * sl];
          v = (i == j) ? d2 * v : 0.0;
        }
      }
    }
    return {probs, std::move(out)};
  }

  const int b = static_cast<int>(*outcome);
  if (b < 0 || b > 3) throw InvalidArgument("Bell outcome index out of range");
  if (probs[b] < kImpossibleProbability) throw ImpossibleOutcome("Bell outcome has zero probability");
  const double inv = 1.0 / probs[b];
  for (std::size_t r = 0; r < strata; ++r) {
    const std::size_t base = detail::stratum_base(r, sk, sl);
    double w = c[base];
    for (int j = 0; j < 3; ++j) w += d2 * kBellSigns[b][j] * c[base + (j + 1) * (sk + sl)];
    w *= 0.25;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) c[base + i * sk + j * sl] = 0.0;
    }
    c[base] = w;
    for (int j = 0; j < 3; ++j) c[base + (j + 1) * (sk + sl)] = kBellSigns[b][j] * w;
  }
  for (auto& v : c) v *= inv;
  c[0] = std::ldexp(1.0, -n);
  return {probs, std::move(out)};
}

double schmidt_entropy(const PauliState& state, std::span<const int> partition) {
  require_subset(partition, state.num_qubits());
  if (std::abs(state.purity() - 1.0) > 1e-8) throw NotPure("Schmidt entropy requires a pure state");
  const auto dense = oracle::from_pauli(state);
  double entropy = 0.0;
  for (double p : oracle::reduced_spectrum(dense, partition)) {
    if (p > 0.0) entropy -= p * std::log(p);
  }
  return std::max(entropy, 0.0);
}

}  // namespace paulisim
