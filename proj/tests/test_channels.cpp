#include <doctest.h>

#include <cmath>
#include <numbers>

#include "paulisim/channels.hpp"
#include "paulisim/errors.hpp"
#include "paulisim/oracle.hpp"
#include "support/random.hpp"

using namespace paulisim;
namespace ts = testsupport;

namespace {

double max_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

double max_diff(const PauliState& a, const PauliState& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("Ptm validates the trace-preserving row") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
  CHECK_NOTHROW(Ptm(1, m));
  m(0, 2) = 1e-6;
  CHECK_THROWS_AS(Ptm(1, m), InvalidChannel);
  CHECK_THROWS_AS(Ptm(1, Eigen::MatrixXd::Identity(16, 16)), InvalidChannel);
  m(0, 2) = 1e-12;
  CHECK(Ptm(1, m)(0, 2) == 0.0);
}

TEST_CASE("composition multiplies transfer matrices") {
  const Ptm a = noisy_rotation_ptm(Axis::x, 0.4, 0.0, 1.0);
  const Ptm b = decay_ptm(0.7, 0.8);
  CHECK(max_diff(b.after(a).matrix(), b.matrix() * a.matrix()) < 1e-15);
  CHECK(max_diff(Ptm::identity(2).matrix(), Eigen::MatrixXd::Identity(16, 16)) == 0.0);
}

TEST_CASE("closed-form transfer matrices equal their Kraus constructions") {
  CHECK(max_diff(hadamard_ptm().matrix(), kraus_to_ptm(hadamard_kraus()).matrix()) < 1e-14);
  ts::Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const double theta = ts::uniform(rng, -4, 4), alpha = ts::uniform(rng, -0.5, 0.5), r = ts::uniform(rng, 0, 1);
    for (Axis axis : {Axis::x, Axis::y, Axis::z}) {
      CHECK(max_diff(noisy_rotation_ptm(axis, theta, alpha, r).matrix(),
                     kraus_to_ptm(noisy_rotation_kraus(axis, theta, alpha, r)).matrix()) < 1e-13);
    }
    CHECK(max_diff(noisy_cnot_ptm(alpha, r).matrix(), kraus_to_ptm(noisy_cnot_kraus(alpha, r)).matrix()) < 1e-13);
    const double f = ts::uniform(rng, 0, 1), g = ts::uniform(rng, 0, 1), p = ts::uniform(rng, 0, 1);
    CHECK(max_diff(decoherence_ptm(f).matrix(), kraus_to_ptm(decoherence_kraus(f)).matrix()) < 1e-14);
    CHECK(max_diff(decay_ptm(p, g).matrix(), kraus_to_ptm(decay_kraus(p, g)).matrix()) < 1e-14);
  }
}

TEST_CASE("noiseless gates are exact") {
  const Ptm rz = noisy_rotation_ptm(Axis::z, std::numbers::pi / 2, 0.0, 1.0);
  CHECK(rz(2, 1) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(rz(1, 1)) < 1e-15);
  const Ptm cx = noisy_cnot_ptm(0.0, 1.0);
  CHECK(max_diff(cx.matrix(), kraus_to_ptm(unitary_kraus(cnot_pulse_matrix(0.0))).matrix()) < 1e-15);
  // X on the control spreads to XX.
  CHECK(cx(pauli_index("XX"), pauli_index("XI")) == doctest::Approx(1.0));
  CHECK(cx(pauli_index("ZZ"), pauli_index("IZ")) == doctest::Approx(1.0));
}

TEST_CASE("rotation contraction scales the transverse Bloch components by r") {
  const double theta = 0.7, alpha = 0.1, r = 0.6;
  const PauliState s = apply_ptm(from_bloch({1, 0, 0}), std::vector<int>{0}, noisy_rotation_ptm(Axis::z, theta, alpha, r));
  const Vec3 b = s.bloch_vector(0);
  CHECK(b[0] == doctest::Approx(r * std::cos(theta + alpha)));
  CHECK(b[1] == doctest::Approx(r * std::sin(theta + alpha)));
  CHECK(b[2] == doctest::Approx(0.0));
}

TEST_CASE("apply_ptm agrees with dense Kraus evolution on arbitrary targets") {
  ts::Rng rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 3;
    const PauliState s = ts::random_mixed_state(n, rng);
    const auto dense = oracle::from_pauli(s);
    const int a = static_cast<int>(rng() % n);
    int b = static_cast<int>(rng() % n);
    while (b == a) b = static_cast<int>(rng() % n);
    const std::vector<int> one{a}, two{a, b};
    const auto axis = static_cast<Axis>(trial % 3);
    const double theta = ts::uniform(rng, -3, 3), alpha = ts::uniform(rng, -0.3, 0.3), r = ts::uniform(rng, 0.5, 1);

    const auto rot = apply_ptm(s, one, noisy_rotation_ptm(axis, theta, alpha, r));
    CHECK(max_diff(rot, oracle::to_pauli(oracle::evolve_kraus(dense, noisy_rotation_kraus(axis, theta, alpha, r), one))) <
          1e-13);
    const auto cx = apply_ptm(s, two, noisy_cnot_ptm(alpha, r));
    CHECK(max_diff(cx, oracle::to_pauli(oracle::evolve_kraus(dense, noisy_cnot_kraus(alpha, r), two))) < 1e-13);
    CHECK(cx[0] == std::ldexp(1.0, -n));
  }
  const PauliState s = init_pure_zero(2);
  CHECK_THROWS_AS(apply_ptm(s, std::vector<int>{0, 0}, noisy_cnot_ptm(0, 1)), InvalidArgument);
  CHECK_THROWS_AS(apply_ptm(s, std::vector<int>{0}, noisy_cnot_ptm(0, 1)), InvalidArgument);
  CHECK_THROWS_AS(apply_ptm(s, std::vector<int>{2}, hadamard_ptm()), InvalidArgument);
}

TEST_CASE("memory step equals decoherence then decay on every qubit") {
  ts::Rng rng(23);
  NoiseModel noise;
  noise.p = 0.7;
  noise.f = 0.9;
  noise.g = 0.85;
  const PauliState s = ts::random_mixed_state(3, rng);
  auto dense = oracle::from_pauli(s);
  for (int q = 0; q < 3; ++q) {
    const std::vector<int> t{q};
    dense = oracle::evolve_kraus(dense, decoherence_kraus(noise.f), t);
    dense = oracle::evolve_kraus(dense, decay_kraus(noise.p, noise.g), t);
  }
  CHECK(max_diff(memory_step(s, noise), oracle::to_pauli(dense)) < 1e-14);
  CHECK(max_diff(memory_step(s, NoiseModel{}), s) == 0.0);
}

TEST_CASE("thermal state is the decay fixed point") {
  for (double p : {0.2, 0.5, 0.9}) {
    const PauliState t = init_thermal(2, p);
    NoiseModel noise;
    noise.p = p;
    noise.g = 0.7;
    noise.f = 0.6;
    CHECK(max_diff(memory_step(t, noise), t) < 1e-15);
  }
}

TEST_CASE("unitality of the memory channels") {
  CHECK(decoherence_kraus(0.4).unitality_error() < 1e-15);
  CHECK(decay_kraus(1.0, 0.5).unitality_error() > 0.1);
  CHECK(decay_kraus(0.5, 0.5).unitality_error() < 1e-15);
}

TEST_CASE("every transfer matrix builder is completely positive") {
  for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    CHECK(oracle::choi_positive(decoherence_ptm(x)));
    CHECK(oracle::choi_positive(decay_ptm(x, 1.0 - x)));
    CHECK(oracle::choi_positive(noisy_rotation_ptm(Axis::y, 1.0, 0.2, x)));
    CHECK(oracle::choi_positive(noisy_cnot_ptm(0.3, x)));
  }
}

TEST_CASE("noise model validation") {
  NoiseModel m;
  CHECK_NOTHROW(m.validate());
  m.p = 1.2;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);
  m = {};
  m.alpha_bar = INFINITY;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);
  m = {};
  m.g = -0.1;
  CHECK_THROWS_AS(m.validate(), InvalidArgument);
}

TEST_CASE("POVM application") {
  // Trine POVM on qubit 1 of a random two-qubit state.
  ts::Rng rng(24);
  const PauliState s = ts::random_mixed_state(2, rng);
  std::vector<CMatrix> effects;
  for (int k = 0; k < 3; ++k) {
    const double phi = 2 * std::numbers::pi * k / 3;
    effects.push_back((pauli_matrix(0) + std::cos(phi) * pauli_matrix(3) + std::sin(phi) * pauli_matrix(1)) / 3.0);
  }
  const std::vector<int> target{1};
  const auto res = apply_povm(s, target, effects);
  const auto dense = oracle::from_pauli(s);
  double total = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double expected = oracle::trace_product(dense, oracle::embed(effects[k], target, 2)).real();
    CHECK(res.probabilities[k] == doctest::Approx(expected).epsilon(1e-12));
    total += res.probabilities[k];
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK(res.state[0] == 0.25);

  std::vector<CMatrix> short_sum{effects[0], effects[1]};
  CHECK_THROWS_AS(apply_povm(s, target, short_sum), InvalidPovm);
  std::vector<CMatrix> negative{pauli_matrix(0) + pauli_matrix(3) * 1.5, -1.5 * pauli_matrix(3)};
  CHECK_THROWS_AS(apply_povm(s, target, negative), InvalidPovm);
}

TEST_CASE("transfer matrix cache") {
  PtmCache cache;
  const Ptm& a = cache.rotation(Axis::x, 0.3, 0.1, 0.9);
  const Ptm& b = cache.rotation(Axis::x, 0.3, 0.1, 0.9);
  CHECK(&a == &b);
  const Ptm& wrapped = cache.rotation(Axis::x, 0.3 + 2 * std::numbers::pi, 0.1, 0.9);
  CHECK(max_diff(wrapped.matrix(), a.matrix()) < 1e-12);
  cache.cnot(0.0, 1.0);
  CHECK(cache.size() >= 2);
  CHECK(max_diff(cache.rotation(Axis::z, -1.2, 0.0, 0.8).matrix(), noisy_rotation_ptm(Axis::z, -1.2, 0.0, 0.8).matrix()) <
        1e-15);
}
