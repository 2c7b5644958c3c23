#include <doctest.h>

#include <cmath>

#include "paulisim/errors.hpp"
#include "paulisim/oracle.hpp"
#include "support/random.hpp"

using namespace paulisim;
namespace ts = testsupport;

namespace {

Eigen::VectorXcd to_eigen(const std::vector<std::complex<double>>& v) {
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

CMatrix swap_matrix() {
  CMatrix s = CMatrix::Zero(4, 4);
  s(0, 0) = s(3, 3) = 1.0;
  s(1, 2) = s(2, 1) = 1.0;
  return s;
}

}  // namespace

TEST_CASE("dense and Pauli forms convert losslessly") {
  ts::Rng rng(51);
  for (int n = 1; n <= 4; ++n) {
    const PauliState s = ts::random_mixed_state(n, rng);
    const auto d = oracle::from_pauli(s);
    CHECK(d.is_valid());
    CHECK(hs_distance(oracle::to_pauli(d), s) < 1e-28);
  }
  oracle::DenseState bad{1, CMatrix::Zero(2, 2)};
  bad.rho(0, 0) = 1.0;
  bad.rho(0, 1) = std::complex<double>(0, 0.3);
  CHECK_FALSE(bad.is_valid());
  CHECK_THROWS_AS(oracle::to_pauli(bad), InvalidState);
}

TEST_CASE("embedding follows the target order") {
  const std::vector<int> forward{0, 1}, reversed{1, 0};
  const CMatrix cx = cnot_pulse_matrix(0.0);
  const CMatrix a = oracle::embed(cx, reversed, 2);
  CHECK((a - swap_matrix() * cx * swap_matrix()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((oracle::embed(cx, forward, 2) - cx).cwiseAbs().maxCoeff() < 1e-15);
  // X on qubit 1 of 2 is I x X.
  const std::vector<int> one{1};
  const CMatrix x1 = oracle::embed(pauli_matrix(1), one, 2);
  CHECK((x1 - pauli_string_matrix(pauli_index("IX"), 2)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(oracle::embed(cx, std::vector<int>{0, 0}, 2), InvalidArgument);
}

TEST_CASE("evolution rejects invalid operators") {
  const auto d = oracle::from_pauli(init_pure_zero(1));
  const std::vector<int> t{0};
  CHECK_THROWS_AS(oracle::evolve_unitary(d, 2.0 * pauli_matrix(0), t), InvalidArgument);
  KrausSet broken{1, {0.5 * pauli_matrix(0)}};
  CHECK_THROWS_AS(oracle::evolve_kraus(d, broken, t), InvalidChannel);
  CHECK_THROWS_AS(KrausSet::make(1, {0.5 * pauli_matrix(0)}), InvalidChannel);
}

TEST_CASE("partial trace and spectrum of a Bell pair") {
  const double s = 1.0 / std::sqrt(2.0);
  const std::vector<std::complex<double>> bell{s, 0, 0, s};
  const auto d = oracle::pure_state(to_eigen(bell));
  const auto spec = oracle::reduced_spectrum(d, std::vector<int>{1});
  CHECK(spec[0] == doctest::Approx(0.5));
  CHECK(spec[1] == doctest::Approx(0.5));
  CHECK(oracle::purity(d) == doctest::Approx(1.0));
  CHECK(oracle::purity(oracle::partial_trace(d, std::vector<int>{0})) == doctest::Approx(0.5));
}

TEST_CASE("Choi matrices detect complete positivity") {
  const CMatrix id_choi = oracle::choi_matrix(identity_kraus(1));
  CHECK(oracle::choi_min_eigenvalue(id_choi) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(id_choi.trace().real() == doctest::Approx(2.0));
  // Transpose: positive but not completely positive.
  Eigen::MatrixXd transpose = Eigen::MatrixXd::Identity(4, 4);
  transpose(2, 2) = -1.0;
  const Ptm t(1, transpose);
  CHECK_FALSE(oracle::choi_positive(t));
  CHECK(oracle::choi_min_eigenvalue(oracle::choi_matrix(t)) == doctest::Approx(-1.0));
  CHECK(oracle::choi_positive(decay_kraus(0.3, 0.2)));
  // Both Choi routes agree.
  const KrausSet k = noisy_cnot_kraus(0.2, 0.7);
  CHECK((oracle::choi_matrix(k) - oracle::choi_matrix(kraus_to_ptm(k))).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("Schmidt decomposition reconstructs the state") {
  ts::Rng rng(52);
  for (int trial = 0; trial < 6; ++trial) {
    const Eigen::VectorXcd psi = to_eigen(ts::random_statevector(4, rng));
    const std::vector<int> part{2, 0};
    const auto sd = oracle::schmidt_decompose(psi, part);
    CHECK(sd.dim_a == 4);
    CHECK(sd.dim_b == 4);
    Eigen::VectorXcd rebuilt = Eigen::VectorXcd::Zero(16);
    double norm = 0.0;
    for (int i = 0; i < sd.rank; ++i) {
      Eigen::VectorXcd term(16);
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) term(a * 4 + b) = sd.basis_a(a, i) * sd.basis_b(b, i);
      }
      rebuilt += sd.coefficients[i] * term;
      norm += sd.coefficients[i] * sd.coefficients[i];
    }
    CHECK((rebuilt - oracle::reorder_leading(psi, part)).norm() < 1e-12);
    CHECK(norm == doctest::Approx(1.0));
    for (int i = 1; i < sd.rank; ++i) CHECK(sd.coefficients[i] <= sd.coefficients[i - 1]);
  }
  const double s = 1.0 / std::sqrt(2.0);
  const auto bell = oracle::schmidt_decompose(to_eigen({s, 0, 0, s}), std::vector<int>{0});
  CHECK(bell.rank == 2);
  CHECK(bell.coefficients[0] == doctest::Approx(s));
  const auto product = oracle::schmidt_decompose(to_eigen({1, 0, 0, 0}), std::vector<int>{1});
  CHECK(product.rank == 1);
  CHECK_THROWS_AS(oracle::schmidt_decompose(to_eigen({1, 0, 0, 0}), std::vector<int>{0, 1}), InvalidArgument);
}

TEST_CASE("reordering moves partition qubits to the front") {
  // |q0 q1 q2> = |1 0 0> becomes |q2 q0 q1> = |0 1 0>.
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(8);
  psi(4) = 1.0;
  const auto out = oracle::reorder_leading(psi, std::vector<int>{2});
  CHECK(std::abs(out(2) - 1.0) < 1e-15);
}
