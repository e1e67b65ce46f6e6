#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "qoc/system.hpp"

using namespace qoc;
using qoc::testing::max_abs;

namespace {

const Complex kI{0.0, 1.0};

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

// Small Gaussian integers so products are exact in floating point.
ComplexMatrix integer_matrix(std::mt19937_64& rng, Eigen::Index dim) {
  std::uniform_int_distribution<int> d(-3, 3);
  ComplexMatrix m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = Complex(d(rng), d(rng));
  }
  return m;
}

}  // namespace

TEST_CASE("kron block layout") {
  CHECK(kron(identity(2), identity(2)) == identity(4));

  ComplexMatrix expected_z = ComplexMatrix::Zero(4, 4);
  expected_z.diagonal() << 1.0, 1.0, -1.0, -1.0;
  expected_z *= (1.0 / std::numbers::sqrt2);
  CHECK(max_abs(kron(spin_z(), identity(2)) - expected_z) == 0.0);

  // Sx ⊗ Sx = (1/2) antidiag(1, 1, 1, 1)
  ComplexMatrix expected_xx = ComplexMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) expected_xx(i, 3 - i) = 0.5;
  CHECK(max_abs(kron(spin_x(), spin_x()) - expected_xx) <= 2e-16);

  ComplexMatrix a(2, 2), b(3, 3);
  a << 1.0, 2.0, 3.0, 4.0;
  b.setIdentity();
  const ComplexMatrix ab = kron(a, b);
  CHECK(ab.rows() == 6);
  CHECK(ab(1 * 3 + 2, 0 * 3 + 2) == a(1, 0));
  CHECK(ab(1 * 3 + 2, 0 * 3 + 1) == Complex(0.0));
}

TEST_CASE("kron is associative on exact entries") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = integer_matrix(rng, 2);
    const auto b = integer_matrix(rng, 3);
    const auto c = integer_matrix(rng, 2);
    CHECK(kron(kron(a, b), c) == kron(a, kron(b, c)));
  }
}

TEST_CASE("commutator") {
  std::mt19937_64 rng(11);
  const auto a = testing::random_hermitian(rng, 3);
  const auto b = testing::random_hermitian(rng, 3);
  CHECK(max_abs(commutator(a, a)) == 0.0);
  CHECK(max_abs(commutator(identity(3), b)) == 0.0);
  CHECK(commutator(a, b) == -commutator(b, a));

  // [Sx, Sy] = i sqrt(2) Sz with the 1/sqrt(2) normalization
  const ComplexMatrix expected = kI * std::numbers::sqrt2 * spin_z();
  CHECK(max_abs(commutator(spin_x(), spin_y()) - expected) < 1e-15);

  CHECK_THROWS_AS(commutator(identity(2), identity(3)), Error);
}

TEST_CASE("Jacobi identity on random Hermitian triples") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = testing::random_hermitian(rng, 4);
    const auto b = testing::random_hermitian(rng, 4);
    const auto c = testing::random_hermitian(rng, 4);
    const ComplexMatrix jacobi = commutator(a, commutator(b, c)) +
                                 commutator(b, commutator(c, a)) +
                                 commutator(c, commutator(a, b));
    CHECK(max_abs(jacobi) <= 1e-12);
  }
}

TEST_CASE("nested commutator") {
  std::mt19937_64 rng(17);
  const auto x = testing::random_hermitian(rng, 3);
  const auto b = testing::random_hermitian(rng, 3);
  CHECK(nested_commutator(x, b, 0) == b);
  CHECK(nested_commutator(x, b, 1) == commutator(x, b));
  CHECK(max_abs(nested_commutator(x, b, 3) -
                commutator(x, commutator(x, commutator(x, b)))) < 1e-13);

  // ad²_{Sz}(Sx) = 2 Sx
  CHECK(max_abs(nested_commutator(spin_z(), spin_x(), 2) - 2.0 * spin_x()) <
        1e-15);
  CHECK_THROWS_AS(nested_commutator(x, b, -1), Error);
  CHECK_THROWS_AS(nested_commutator(identity(2), b, 1), Error);
}

TEST_CASE("expm of Hermitian generator") {
  std::mt19937_64 rng(19);
  const auto h = testing::random_hermitian(rng, 4);
  CHECK(max_abs(expm_hermitian_generator(h, 0.0) - identity(4)) < 1e-14);

  ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
  diag.diagonal() << 0.3, -1.7;
  const ComplexMatrix ed = expm_hermitian_generator(diag, 2.0);
  CHECK(std::abs(ed(0, 0) - std::exp(-kI * 0.6)) < 1e-15);
  CHECK(std::abs(ed(1, 1) - std::exp(kI * 3.4)) < 1e-15);
  CHECK(std::abs(ed(0, 1)) < 1e-15);

  // exp(-i π/2 σx) = -i σx, checked against the series oracle as well.
  const ComplexMatrix pauli = pauli_x();
  const ComplexMatrix rotated =
      expm_hermitian_generator(pauli, std::numbers::pi / 2.0);
  CHECK(max_abs(rotated - (-kI) * pauli) < 1e-15);
  CHECK(max_abs(rotated - testing::taylor_expm(-kI * std::numbers::pi / 2.0 *
                                               pauli)) < 1e-14);

  for (int trial = 0; trial < 10; ++trial) {
    const auto g = testing::random_hermitian(rng, 5);
    const double theta = 0.37 * (trial + 1);
    CHECK(max_abs(expm_hermitian_generator(g, theta) -
                  testing::taylor_expm(-kI * theta * g)) < 1e-12);
  }
}

TEST_CASE("expm unitarity and angle additivity") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> angle(-10.0, 10.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index dim = 2 + trial % 7;
    const auto h = testing::random_hermitian(rng, dim, 10.0);
    const double scale = h.operatorNorm();
    const double theta = angle(rng) * 100.0 / std::max(scale, 1.0);
    CHECK(unitarity_defect(expm_hermitian_generator(h, theta)) <= 1e-12);

    const double t1 = angle(rng) / scale;
    const double t2 = angle(rng) / scale;
    CHECK(max_abs(expm_hermitian_generator(h, t1) *
                      expm_hermitian_generator(h, t2) -
                  expm_hermitian_generator(h, t1 + t2)) <= 1e-10);
  }
}

TEST_CASE("expm rejects non-Hermitian input") {
  ComplexMatrix m(2, 2);
  m << 1.0, 1.0, 0.0, 1.0;
  CHECK_THROWS_AS(expm_hermitian_generator(m, 1.0), Error);
  CHECK_THROWS_AS(expm_hermitian_generator(ComplexMatrix(2, 3), 1.0), Error);
  CHECK_THROWS_AS(expm_hermitian_generator(ComplexMatrix(0, 0), 1.0), Error);
  // A defect far below the relative tolerance is accepted.
  ComplexMatrix nearly(2, 2);
  nearly << 100.0, Complex(1.0, 1e-11), Complex(1.0, 0.0), -5.0;
  CHECK_NOTHROW(expm_hermitian_generator(nearly, 1.0));
}

TEST_CASE("overlap trace") {
  std::mt19937_64 rng(29);
  const auto u = testing::random_unitary(rng, 4);
  const Complex self = overlap_trace(u, u);
  CHECK(std::abs(self - Complex(4.0, 0.0)) < 1e-12);
  CHECK(std::abs(overlap_trace(identity(2), pauli_x())) == 0.0);

  const double phase = 0.83;
  const Complex expected = 4.0 * std::exp(-kI * phase);
  CHECK(std::abs(overlap_trace(std::exp(kI * phase) * u, u) - expected) < 1e-12);

  for (int trial = 0; trial < 10; ++trial) {
    const ComplexMatrix a = testing::random_hermitian(rng, 3) + kI * testing::random_hermitian(rng, 3);
    const ComplexMatrix b = testing::random_hermitian(rng, 3) + kI * testing::random_hermitian(rng, 3);
    CHECK(overlap_trace(a, b) == std::conj(overlap_trace(b, a)));
    CHECK(std::abs(overlap_trace(a, b) - (a.adjoint() * b).trace()) < 1e-13);
  }
  CHECK_THROWS_AS(overlap_trace(identity(2), identity(3)), Error);
}

TEST_CASE("Hermitian and unitary predicates") {
  CHECK(is_hermitian(spin_y(), 0.0));
  CHECK_FALSE(is_hermitian(kI * spin_x(), 1e-3));
  CHECK(is_unitary(std::numbers::sqrt2 * spin_x(), 1e-15));
  CHECK_FALSE(is_unitary(spin_x(), 1e-3));
}
