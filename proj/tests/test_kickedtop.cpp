#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "paulisim/errors.hpp"
#include "paulisim/kickedtop.hpp"
#include "paulisim/oracle.hpp"
#include "support/random.hpp"

using namespace paulisim;
using namespace paulisim::kickedtop;
namespace ts = testsupport;

namespace {

constexpr double kPi = std::numbers::pi;

// exp(a) by scaling and squaring of a truncated Taylor series.
CMatrix expm(const CMatrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::ldexp(1.0, squarings) > 0.25) ++squarings;
  const CMatrix scaled = a / std::ldexp(1.0, squarings);
  CMatrix term = CMatrix::Identity(a.rows(), a.cols());
  CMatrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

CMatrix floquet_oracle(const CMatrix& jy, const CMatrix& jz, double j, double kappa, double p) {
  const std::complex<double> i(0, 1);
  return expm(-i * kappa * jz * jz / (2 * j)) * expm(-i * p * jy);
}

double phase_free_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return std::abs(1.0 - std::abs(a.dot(b)));
}

Eigen::VectorXcd random_vector(int dim, ts::Rng& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = {normal(rng), normal(rng)};
  return v.normalized();
}

// Collective spin operators on 2J qubits.
CMatrix collective(int two_j, int pauli) {
  const Eigen::Index dim = Eigen::Index{1} << two_j;
  CMatrix s = CMatrix::Zero(dim, dim);
  for (int q = 0; q < two_j; ++q) s += 0.5 * oracle::embed(pauli_matrix(pauli), std::vector<int>{q}, two_j);
  return s;
}

}  // namespace

TEST_CASE("spin operators satisfy the angular momentum algebra") {
  for (int two_j = 1; two_j <= 6; ++two_j) {
    const CMatrix jx = spin_x(two_j), jy = spin_y(two_j), jz = spin_z(two_j);
    const std::complex<double> i(0, 1);
    CHECK((jx * jy - jy * jx - i * jz).cwiseAbs().maxCoeff() < 1e-12);
    const double j = 0.5 * two_j;
    const CMatrix casimir = jx * jx + jy * jy + jz * jz;
    CHECK((casimir - j * (j + 1) * CMatrix::Identity(two_j + 1, two_j + 1)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("Floquet map examples") {
  const Eigen::VectorXcd up = coherent_state(1, 0.0, 0.0);
  const FloquetMap quarter({1, 0.0, kPi / 2});
  CHECK(phase_free_distance(quarter.evolve(up, 4), up) < 1e-10);
  CHECK(phase_free_distance(quarter.evolve(up, 2), up) > 0.5);

  for (int k = 0; k <= 4; ++k) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(5);
    e(k) = 1.0;
    CHECK(phase_free_distance(FloquetMap({4, 5.0, 0.0}).step(e), e) < 1e-14);
  }

  const Eigen::VectorXcd start = coherent_state(2, kPi / 2, 0.0);
  const CMatrix oracle_u = floquet_oracle(spin_y(2), spin_z(2), 1.0, 3.0, kPi / 2);
  CHECK((FloquetMap({2, 3.0, kPi / 2}).step(start) - oracle_u * start).cwiseAbs().maxCoeff() < 1e-10);

  CHECK_THROWS_AS(quarter.step(2.0 * up), InvalidState);
  CHECK_THROWS_AS(FloquetMap({0, 1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(FloquetMap({2, -1.0, 1.0}), InvalidArgument);
}

TEST_CASE("Floquet evolution preserves the norm") {
  ts::Rng rng(71);
  for (int two_j = 1; two_j <= 6; ++two_j) {
    const FloquetMap map({two_j, 7.0, kPi / 2});
    Eigen::VectorXcd v = random_vector(two_j + 1, rng);
    double worst = 0.0;
    for (int s = 0; s < 1000; ++s) {
      v = map.step(v);
      worst = std::max(worst, std::abs(v.norm() - 1.0));
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("without chaos the Floquet spectrum is an equally spaced rotation spectrum") {
  const int two_j = 4;
  const double p = 0.9;
  Eigen::ComplexEigenSolver<CMatrix> solver(FloquetMap({two_j, 0.0, p}).unitary());
  std::vector<double> phases;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) phases.push_back(std::arg(solver.eigenvalues()(i)));
  std::sort(phases.begin(), phases.end());
  for (std::size_t i = 1; i < phases.size(); ++i) CHECK(phases[i] - phases[i - 1] == doctest::Approx(p).epsilon(1e-10));
}

TEST_CASE("spin one-half only precesses") {
  const FloquetMap map({1, 6.0, 1.3});
  Eigen::VectorXcd v = coherent_state(1, 0.7, 2.0);
  for (int s = 0; s < 50; ++s) {
    v = map.step(v);
    const Vec3 d = spin_direction(v);
    CHECK(std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("coherent states") {
  const auto top = coherent_state(3, 0.0, 1.0);
  CHECK(std::abs(top(0) - 1.0) < 1e-15);
  const auto bottom = coherent_state(3, kPi, 0.0);
  CHECK(std::abs(std::abs(bottom(3)) - 1.0) < 1e-15);

  const double theta = 1.1, phi = 0.4;
  for (int two_j = 1; two_j <= 6; ++two_j) {
    const auto v = coherent_state(two_j, theta, phi);
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-14));
    const Vec3 d = spin_direction(v);
    CHECK(d[0] == doctest::Approx(std::sin(theta) * std::cos(phi)).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(std::sin(theta) * std::sin(phi)).epsilon(1e-12));
    CHECK(d[2] == doctest::Approx(std::cos(theta)).epsilon(1e-12));
    const Eigen::VectorXcd q = symmetric_to_qubits(v);
    const PauliState embedded = from_statevector(std::span<const std::complex<double>>(q.data(), q.size()));
    CHECK(hs_distance(embedded, coherent_qubits(two_j, theta, phi)) < 1e-24);
  }
  CHECK_THROWS_AS(coherent_state(2, 4.0, 0.0), InvalidArgument);
}

TEST_CASE("symmetric embedding") {
  ts::Rng rng(72);
  const Eigen::VectorXcd v = random_vector(2, rng);
  CHECK((symmetric_to_qubits(v) - v).cwiseAbs().maxCoeff() == 0.0);

  Eigen::VectorXcd middle = Eigen::VectorXcd::Zero(3);
  middle(1) = 1.0;
  const Eigen::VectorXcd dicke = symmetric_to_qubits(middle);
  CHECK(std::abs(dicke(1) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(dicke(2) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(dicke(0)) + std::abs(dicke(3)) == 0.0);

  CHECK(symmetric_to_qubits(random_vector(4, rng)).norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("embedding commutes with the dynamics") {
  ts::Rng rng(73);
  for (int two_j = 1; two_j <= 3; ++two_j) {
    const TopParams params{two_j, 2.5, 1.1};
    const CMatrix uq = floquet_oracle(collective(two_j, 2), collective(two_j, 3), params.j(), params.kappa, params.p);
    const Eigen::VectorXcd v = random_vector(two_j + 1, rng);
    const Eigen::VectorXcd a = symmetric_to_qubits(FloquetMap(params).step(v));
    const Eigen::VectorXcd b = uq * symmetric_to_qubits(v);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("classical map geometry") {
  const TopParams rotation{2, 0.0, kPi / 2};
  const Vec3 start{0.6, 0.0, 0.8};
  Vec3 v = start;
  for (int s = 0; s < 4; ++s) v = classical_map(v, rotation);
  for (int i = 0; i < 3; ++i) CHECK(v[i] == doctest::Approx(start[i]).epsilon(1e-12));

  const TopParams kicked{2, 3.0, kPi / 2};
  for (double sign : {1.0, -1.0}) {
    const Vec3 out = classical_map({0, 0, sign}, kicked);
    CHECK(std::abs(out[2]) < 1e-15);
    CHECK(std::abs(out[0]) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(classical_map({1, 1, 0}, kicked), InvalidArgument);
}

TEST_CASE("chaotic map separates nearby points") {
  const TopParams chaos{2, 7.0, kPi / 2};
  Vec3 a{std::sin(1.0) * std::cos(0.3), std::sin(1.0) * std::sin(0.3), std::cos(1.0)};
  Vec3 b{std::sin(1.0 + 1e-8) * std::cos(0.3), std::sin(1.0 + 1e-8) * std::sin(0.3), std::cos(1.0 + 1e-8)};
  double gap = 0.0;
  for (int s = 0; s < 40 && gap <= 1e-2; ++s) {
    a = classical_map(a, chaos);
    b = classical_map(b, chaos);
    gap = std::sqrt(std::pow(a[0] - b[0], 2) + std::pow(a[1] - b[1], 2) + std::pow(a[2] - b[2], 2));
  }
  CHECK(gap > 1e-2);
}

TEST_CASE("Lyapunov estimates") {
  ts::Rng rng(74);
  const Vec3 start = ts::random_unit(rng);
  CHECK(std::abs(lyapunov_estimate({2, 0.0, kPi / 2}, start, 2000).exponent) < 1e-3);
  CHECK(std::abs(lyapunov_estimate({2, 4.0, 0.0}, start, 20000, 10).exponent) < 1e-3);
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) sum += lyapunov_estimate({2, 7.0, kPi / 2}, ts::random_unit(rng), 2000).exponent;
  CHECK(sum / 5 > 0.1);
  const auto est = lyapunov_estimate({2, 1.0, 1.0}, start, 500, 5);
  CHECK(est.steps == 500);
  CHECK(est.exponent >= -1e-3);
  CHECK_THROWS_AS(lyapunov_estimate({2, 1.0, 1.0}, start, 99), InvalidArgument);
}

TEST_CASE("linearized Lyapunov exponents") {
  Eigen::Matrix2d inverted;
  inverted << 0, -1, -1, 0;
  CHECK(linear_lyapunov(inverted) == std::pair{1.0, -1.0});
  Eigen::Matrix2d harmonic;
  harmonic << 0, 1, -1, 0;
  CHECK(linear_lyapunov(harmonic) == std::pair{0.0, 0.0});
  CHECK(linear_lyapunov(Eigen::Matrix2d::Identity()) == std::pair{1.0, 1.0});
  Eigen::Matrix2d bad = Eigen::Matrix2d::Identity();
  bad(0, 1) = NAN;
  CHECK_THROWS_AS(linear_lyapunov(bad), InvalidArgument);
}

TEST_CASE("dataset generation") {
  const Dataset full = generate_dataset({2, 6.0, kPi / 2}, 3, 32, 32, 0.3, 9);
  CHECK(full.points.size() == 1024);
  CHECK(full.train_indices().size() == 307);
  CHECK(full.validation_indices().size() == 717);

  const Dataset again = generate_dataset({2, 6.0, kPi / 2}, 3, 32, 32, 0.3, 9);
  CHECK(again.train_indices() == full.train_indices());
  const Dataset reseeded = generate_dataset({2, 6.0, kPi / 2}, 3, 32, 32, 0.3, 10);
  CHECK(reseeded.train_indices() != full.train_indices());

  const Dataset still = generate_dataset({2, 6.0, kPi / 2}, 0, 8, 6, 0.5, 1);
  for (const auto& p : still.points) {
    CHECK_FALSE(p.equator);
    const double z = p.state.bloch_vector(0)[2];
    CHECK((z > 0 ? 1 : -1) == p.label);
  }
  CHECK_THROWS_AS(generate_dataset({2, 1.0, 1.0}, 1, 1, 4, 0.3, 1), InvalidArgument);
  CHECK_THROWS_AS(generate_dataset({2, 1.0, 1.0}, 1, 4, 4, 1.0, 1), InvalidArgument);
}

TEST_CASE("classifier circuit structure and predictions") {
  const ClassifierSpec spec{3, 2};
  CHECK(spec.parameter_count() == 12);
  std::vector<double> zeros(12, 0.0);
  const Circuit c = classifier_circuit(spec, zeros);
  CHECK(c.instructions.size() == 2 * (3 + 3 + 3));
  CHECK_THROWS_AS(classifier_circuit(spec, std::vector<double>(5)), InvalidArgument);

  const PauliState north = coherent_qubits(3, 0.3, 0.0);
  CHECK(classify(ClassifierSpec{3, 0}, north, {}) == 1);
  CHECK(classify(ClassifierSpec{3, 0}, coherent_qubits(3, 2.8, 0.0), {}) == -1);
  const double a = classifier_output(spec, north, zeros);
  CHECK(a == classifier_output(spec, north, zeros));
  CHECK_THROWS_AS(classify(spec, coherent_qubits(2, 0.3, 0.0), zeros), InvalidArgument);
}

TEST_CASE("training on a trivially separable dataset") {
  const Dataset data = generate_dataset({2, 0.0, kPi / 2}, 1, 16, 16, 0.3, 3);
  const ClassifierSpec spec{2, 2};
  TrainConfig cfg;
  cfg.seed = 5;
  const TrainResult r = train(spec, data, cfg);
  CHECK(r.train_accuracy >= 0.9);
  CHECK(r.history.size() == r.evaluations);
  CHECK(std::is_sorted(r.history.begin(), r.history.end()));
  CHECK(accuracy(spec, data, data.validation_indices(), r.parameters) >= 0.85);
  const TrainResult again = train(spec, data, cfg);
  CHECK(again.parameters == r.parameters);
}

TEST_CASE("identical labels train to full accuracy at once") {
  Dataset data = generate_dataset({2, 0.0, kPi / 2}, 0, 8, 4, 0.5, 1);
  std::erase_if(data.points, [](const DataPoint& p) { return p.label < 0; });
  const TrainResult r = train(ClassifierSpec{2, 0}, data, TrainConfig{});
  CHECK(r.train_accuracy == 1.0);
  CHECK(r.history.front() == 1.0);
  CHECK(r.evaluations == 1);
}
