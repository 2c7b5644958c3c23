#include "paulisim/kickedtop.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <random>

#include <Eigen/Eigenvalues>

#include "paulisim/engine.hpp"
#include "paulisim/errors.hpp"

namespace paulisim::kickedtop {

namespace {

using cd = std::complex<double>;
using Mat3 = Eigen::Matrix3d;

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

CMatrix exp_hermitian(const CMatrix& h, double t) {
  // exp(-i t h) for Hermitian h
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h);
  const Eigen::VectorXd ev = solver.eigenvalues();
  Eigen::VectorXcd phases(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) phases(i) = std::polar(1.0, -t * ev(i));
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

void require_unit(const Vec3& v) {
  const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (std::abs(norm - 1.0) > 1e-10) throw InvalidArgument("point must lie on the unit sphere");
}

Mat3 rot_y(double a) {
  Mat3 m;
  m << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
  return m;
}

Mat3 rot_z(double a) {
  Mat3 m;
  m << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  return m;
}

struct Score {
  double accuracy = -1.0;
  double margin = -1e300;

  bool beats(const Score& other) const {
    if (accuracy != other.accuracy) return accuracy > other.accuracy;
    return margin > other.margin + 1e-12;
  }
};

std::vector<double> outputs(const ClassifierSpec& spec, const Dataset& data, std::span<const std::size_t> indices,
                            std::span<const double> parameters) {
  const Schedule schedule = partition(classifier_circuit(spec, parameters));
  const NoiseModel noiseless;
  PtmCache cache;
  std::vector<double> out(indices.size());
  const auto count = static_cast<std::ptrdiff_t>(indices.size());
#pragma omp parallel for schedule(static) if (count > 64)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const PauliState end = evolve(schedule, noiseless, data.points[indices[i]].state, cache);
    out[i] = end.bloch_vector(0)[2];
  }
  return out;
}

Score score(const ClassifierSpec& spec, const Dataset& data, std::span<const std::size_t> indices,
            std::span<const double> parameters) {
  const auto out = outputs(spec, data, indices, parameters);
  std::size_t correct = 0;
  double margin = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const int label = data.points[indices[i]].label;
    if ((out[i] > 0.0 ? 1 : -1) == label) ++correct;
    margin += label * out[i];
  }
  const double n = static_cast<double>(out.size());
  return {static_cast<double>(correct) / n, margin / n};
}

void check_spec(const ClassifierSpec& spec, int qubits) {
  if (spec.qubits < 1 || spec.layers < 0) throw InvalidArgument("classifier needs qubits >= 1 and layers >= 0");
  if (spec.qubits != qubits) throw InvalidArgument("classifier width does not match the state");
}

}  // namespace

void TopParams::validate() const {
  if (two_j < 1 || two_j > 64) throw InvalidArgument("2J must be an integer in [1, 64]");
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw InvalidArgument("kappa must be finite and non-negative");
  if (!std::isfinite(p)) throw InvalidArgument("kick angle p must be finite");
}

CMatrix spin_z(int two_j) {
  const double j = 0.5 * two_j;
  CMatrix m = CMatrix::Zero(two_j + 1, two_j + 1);
  for (int k = 0; k <= two_j; ++k) m(k, k) = j - k;
  return m;
}

namespace {
// J+ |J, m> = sqrt(J(J+1) - m(m+1)) |J, m+1>, i.e. index k -> k-1.
CMatrix spin_raise(int two_j) {
  const double j = 0.5 * two_j;
  CMatrix m = CMatrix::Zero(two_j + 1, two_j + 1);
  for (int k = 1; k <= two_j; ++k) {
    const double mk = j - k;
    m(k - 1, k) = std::sqrt(j * (j + 1) - mk * (mk + 1));
  }
  return m;
}
}  // namespace

CMatrix spin_x(int two_j) {
  const CMatrix up = spin_raise(two_j);
  return 0.5 * (up + up.adjoint());
}

CMatrix spin_y(int two_j) {
  const CMatrix up = spin_raise(two_j);
  return cd(0, -0.5) * (up - up.adjoint());
}

FloquetMap::FloquetMap(const TopParams& params) : params_(params) {
  params.validate();
  const CMatrix jz = spin_z(params.two_j);
  const CMatrix kick = exp_hermitian(spin_y(params.two_j), params.p);
  Eigen::VectorXcd twist(params.two_j + 1);
  for (int k = 0; k <= params.two_j; ++k) {
    const double m = jz(k, k).real();
    twist(k) = std::polar(1.0, -params.kappa * m * m / (2.0 * params.j()));
  }
  u_ = twist.asDiagonal() * kick;
}

Eigen::VectorXcd FloquetMap::step(const Eigen::VectorXcd& state) const {
  if (state.size() != u_.rows()) throw InvalidArgument("state dimension must be 2J + 1");
  if (std::abs(state.norm() - 1.0) > 1e-10) throw InvalidState("state is not normalized");
  return u_ * state;
}

Eigen::VectorXcd FloquetMap::evolve(Eigen::VectorXcd state, std::size_t steps) const {
  for (std::size_t s = 0; s < steps; ++s) state = step(state);
  return state;
}

Eigen::VectorXcd floquet_step(const Eigen::VectorXcd& state, const TopParams& params) {
  return FloquetMap(params).step(state);
}

Eigen::VectorXcd coherent_state(int two_j, double theta, double phi) {
  if (two_j < 1) throw InvalidArgument("2J must be positive");
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw InvalidArgument("theta must lie in [0, pi]");
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Eigen::VectorXcd v(two_j + 1);
  for (int k = 0; k <= two_j; ++k) {
    v(k) = std::sqrt(binomial(two_j, k)) * std::pow(c, two_j - k) * std::pow(s, k) * std::polar(1.0, k * phi);
  }
  return v;
}

PauliState coherent_qubits(int two_j, double theta, double phi) {
  if (two_j < 1) throw InvalidArgument("2J must be positive");
  const PauliState one = from_bloch({std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
  PauliState out = one;
  for (int q = 1; q < two_j; ++q) out = tensor(out, one);
  return out;
}

Eigen::VectorXcd symmetric_to_qubits(const Eigen::VectorXcd& v) {
  const int n = static_cast<int>(v.size()) - 1;
  if (n < 1 || n > 15) throw InvalidArgument("symmetric embedding supports 1 to 15 qubits");
  std::vector<double> norm(n + 1);
  for (int k = 0; k <= n; ++k) norm[k] = std::sqrt(binomial(n, k));
  Eigen::VectorXcd out(Eigen::Index{1} << n);
  for (std::uint32_t x = 0; x < (1u << n); ++x) {
    const int k = std::popcount(x);
    out(x) = v(k) / norm[k];
  }
  return out;
}

Vec3 spin_direction(const Eigen::VectorXcd& state) {
  const int two_j = static_cast<int>(state.size()) - 1;
  const double j = 0.5 * two_j;
  return {state.dot(spin_x(two_j) * state).real() / j, state.dot(spin_y(two_j) * state).real() / j,
          state.dot(spin_z(two_j) * state).real() / j};
}

Vec3 classical_map(const Vec3& point, const TopParams& params) {
  require_unit(point);
  const double cp = std::cos(params.p), sp = std::sin(params.p);
  const double x = point[0] * cp + point[2] * sp;
  const double y = point[1];
  const double z = -point[0] * sp + point[2] * cp;
  const double a = params.kappa * z;
  Vec3 out{x * std::cos(a) - y * std::sin(a), x * std::sin(a) + y * std::cos(a), z};
  const double norm = std::sqrt(out[0] * out[0] + out[1] * out[1] + out[2] * out[2]);
  for (double& c : out) c /= norm;
  return out;
}

LyapunovEstimate lyapunov_estimate(const TopParams& params, const Vec3& point, std::size_t steps,
                                   std::size_t renorm_interval) {
  params.validate();
  require_unit(point);
  if (steps < 100) throw InvalidArgument("Lyapunov estimate needs at least 100 steps");
  if (renorm_interval < 1) throw InvalidArgument("renormalization interval must be positive");

  Eigen::Vector3d v(point[0], point[1], point[2]);
  Eigen::Vector3d helper = Eigen::Vector3d::Zero();
  Eigen::Index least;
  v.cwiseAbs().minCoeff(&least);
  helper(least) = 1.0;
  Eigen::Vector3d t = v.cross(helper).normalized();

  const Mat3 ry = rot_y(params.p);
  double log_growth = 0.0;
  for (std::size_t s = 1; s <= steps; ++s) {
    const Eigen::Vector3d u = ry * v;
    const double a = params.kappa * u(2);
    const Mat3 rz = rot_z(a);
    Mat3 drz;
    drz << -std::sin(a), -std::cos(a), 0, std::cos(a), -std::sin(a), 0, 0, 0, 0;
    const Mat3 jac = (rz + params.kappa * (drz * u) * Eigen::RowVector3d(0, 0, 1)) * ry;
    v = (rz * u).normalized();
    t = jac * t;
    t -= t.dot(v) * v;
    if (s % renorm_interval == 0 || s == steps) {
      const double len = t.norm();
      log_growth += std::log(len);
      t /= len;
    }
  }
  return {log_growth / static_cast<double>(steps), steps};
}

std::pair<double, double> linear_lyapunov(const Eigen::Matrix2d& m) {
  if (!m.allFinite()) throw InvalidArgument("matrix entries must be finite");
  const double half_trace = 0.5 * m.trace();
  const double disc = half_trace * half_trace - m.determinant();
  if (disc < 0.0) return {half_trace, half_trace};
  const double root = std::sqrt(disc);
  return {half_trace + root, half_trace - root};
}

std::vector<std::size_t> Dataset::train_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].train) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> Dataset::validation_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].train) out.push_back(i);
  }
  return out;
}

Dataset generate_dataset(const TopParams& params, std::size_t steps, int grid_theta, int grid_phi,
                         double train_fraction, std::uint64_t seed) {
  params.validate();
  if (params.two_j > 15) throw InvalidArgument("dataset states need 2J <= 15 qubits");
  if (grid_theta < 2 || grid_phi < 2) throw InvalidArgument("grid dimensions must be at least 2");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw InvalidArgument("train fraction must lie in (0, 1)");

  const std::size_t total = static_cast<std::size_t>(grid_theta) * static_cast<std::size_t>(grid_phi);
  const auto n_train = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(train_fraction * total)), 1,
                                               total - 1);
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> in_train(total, false);
  for (std::size_t i = 0; i < n_train; ++i) in_train[order[i]] = true;

  const FloquetMap map(params);
  std::vector<std::optional<PauliState>> states(total);
  const auto count = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < count; ++idx) {
    const int i = static_cast<int>(idx / grid_phi), j = static_cast<int>(idx % grid_phi);
    const double theta = (i + 0.5) * std::numbers::pi / grid_theta;
    const double phi = 2.0 * std::numbers::pi * j / grid_phi;
    const Eigen::VectorXcd evolved = map.evolve(coherent_state(params.two_j, theta, phi), steps);
    const Eigen::VectorXcd qubits = symmetric_to_qubits(evolved);
    states[idx] = from_statevector(std::span<const cd>(qubits.data(), static_cast<std::size_t>(qubits.size())));
  }

  Dataset data{params, steps, grid_theta, grid_phi, seed, {}};
  data.points.reserve(total);
  for (std::size_t idx = 0; idx < total; ++idx) {
    const int i = static_cast<int>(idx / grid_phi), j = static_cast<int>(idx % grid_phi);
    const double theta = (i + 0.5) * std::numbers::pi / grid_theta;
    const double cos_theta = std::cos(theta);
    data.points.push_back({theta, 2.0 * std::numbers::pi * j / grid_phi, cos_theta > 1e-12 ? 1 : -1,
                           std::abs(cos_theta) < 1e-12, in_train[idx], std::move(*states[idx])});
  }
  return data;
}

void append_cnot_ring(Circuit& circuit) {
  const int n = circuit.num_qubits;
  if (n < 2) return;
  for (int start : {0, 1}) {
    for (int q = start; q + 1 < n; q += 2) circuit.instructions.push_back(Instruction::cx(q, q + 1));
  }
  circuit.instructions.push_back(Instruction::cx(n - 1, 0));
}

Circuit classifier_circuit(const ClassifierSpec& spec, std::span<const double> parameters) {
  if (spec.qubits < 1 || spec.layers < 0) throw InvalidArgument("classifier needs qubits >= 1 and layers >= 0");
  if (parameters.size() != spec.parameter_count()) {
    throw InvalidArgument("expected " + std::to_string(spec.parameter_count()) + " classifier parameters");
  }
  Circuit c{spec.qubits, {}};
  std::size_t at = 0;
  for (int l = 0; l < spec.layers; ++l) {
    for (int q = 0; q < spec.qubits; ++q) c.instructions.push_back(Instruction::ry(q, parameters[at++]));
    append_cnot_ring(c);
    for (int q = 0; q < spec.qubits; ++q) c.instructions.push_back(Instruction::rz(q, parameters[at++]));
  }
  return c;
}

double classifier_output(const ClassifierSpec& spec, const PauliState& state, std::span<const double> parameters) {
  check_spec(spec, state.num_qubits());
  PtmCache cache;
  const PauliState end = evolve(partition(classifier_circuit(spec, parameters)), NoiseModel{}, state, cache);
  return end.bloch_vector(0)[2];
}

int classify(const ClassifierSpec& spec, const PauliState& state, std::span<const double> parameters) {
  return classifier_output(spec, state, parameters) > 0.0 ? 1 : -1;
}

double accuracy(const ClassifierSpec& spec, const Dataset& data, std::span<const std::size_t> indices,
                std::span<const double> parameters) {
  check_spec(spec, data.params.two_j);
  if (indices.empty()) throw InvalidArgument("no datapoints to score");
  return score(spec, data, indices, parameters).accuracy;
}

std::vector<double> random_parameters(const ClassifierSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::vector<double> out(spec.parameter_count());
  for (double& v : out) v = angle(rng);
  return out;
}

TrainResult train(const ClassifierSpec& spec, const Dataset& data, const TrainConfig& config) {
  check_spec(spec, data.params.two_j);
  const auto indices = data.train_indices();
  if (indices.empty()) throw InvalidArgument("training split is empty");
  if (config.restarts < 1 || config.max_evaluations < 1) throw InvalidArgument("training budget must be positive");

  TrainResult result;
  Score best;
  auto evaluate = [&](std::span<const double> params) {
    const Score s = score(spec, data, indices, params);
    ++result.evaluations;
    if (s.beats(best)) {
      best = s;
      result.parameters.assign(params.begin(), params.end());
    }
    result.history.push_back(best.accuracy);
    return s;
  };
  auto budget_left = [&] { return result.evaluations < config.max_evaluations; };

  std::mt19937_64 rng(config.seed);
  for (int r = 0; r < config.restarts && budget_left() && best.accuracy < 1.0; ++r) {
    std::vector<double> theta = random_parameters(spec, rng());
    Score current = evaluate(theta);
    for (double step : config.steps) {
      bool improved = true;
      while (improved && budget_left() && current.accuracy < 1.0) {
        improved = false;
        for (std::size_t i = 0; i < theta.size() && budget_left(); ++i) {
          for (double dir : {1.0, -1.0}) {
            if (!budget_left()) break;
            std::vector<double> candidate = theta;
            candidate[i] = std::remainder(candidate[i] + dir * step, 2.0 * std::numbers::pi);
            const Score s = evaluate(candidate);
            if (s.beats(current)) {
              theta = std::move(candidate);
              current = s;
              improved = true;
              break;
            }
          }
        }
      }
    }
  }
  result.train_accuracy = best.accuracy;
  return result;
}

}  // namespace paulisim::kickedtop
