#include <doctest.h>

#include <random>

#include "gpcfid/errors.hpp"
#include "gpcfid/linalg.hpp"
#include "support.hpp"

using namespace gpcfid;

TEST_CASE("kron matches the block definition") {
  ComplexMatrix a(2, 2), b(2, 3);
  a << 1, 2, 3, 4;
  b << 0, 1, 2, cplx(0, 1), 1, 0;
  const ComplexMatrix k = kron(a, b);
  REQUIRE(k.rows() == 4);
  REQUIRE(k.cols() == 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK(max_abs(k.block(2 * i, 3 * j, 2, 3) - a(i, j) * b) == 0.0);
}

TEST_CASE("hermitian eigensystem is sorted descending and reconstructs the matrix") {
  std::mt19937_64 rng(1);
  for (int d : {1, 2, 5, 9}) {
    const ComplexMatrix h = testing::random_hermitian(d, rng);
    const Eigensystem es = hermitian_eigensystem(h);
    for (int i = 1; i < d; ++i) CHECK(es.values(i - 1) >= es.values(i));
    const ComplexMatrix rebuilt = es.vectors * es.values.cast<cplx>().asDiagonal() * es.vectors.adjoint();
    CHECK(max_abs(rebuilt - h) < 1e-12);
    CHECK(max_abs(es.vectors.adjoint() * es.vectors - ComplexMatrix::Identity(d, d)) < 1e-12);
  }
}

TEST_CASE("known spectra") {
  const RealVector ev = hermitian_eigenvalues(testing::pauli(2));
  CHECK(ev(0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(ev(1) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(hermitian_eigenvalues(ComplexMatrix::Identity(4, 4)).minCoeff() == doctest::Approx(1.0));
}

TEST_CASE("non-Hermitian input is rejected") {
  ComplexMatrix a(2, 2);
  a << 0, 1, 0, 0;
  CHECK_FALSE(is_hermitian(a));
  CHECK(hermiticity_defect(a) == doctest::Approx(1.0));
  try {
    (void)hermitian_eigensystem(a);
    FAIL("expected NotHermitian");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotHermitian);
  }
}

TEST_CASE("is_psd respects its tolerance") {
  ComplexMatrix h = ComplexMatrix::Identity(3, 3);
  h(2, 2) = -1e-11;
  CHECK(is_psd(h));
  h(2, 2) = -1e-9;
  CHECK_FALSE(is_psd(h));
}

TEST_CASE("vec stacks columns and unvec inverts it") {
  ComplexMatrix x(2, 2);
  x << 1, 2, 3, 4;
  const StateVector v = vec(x);
  CHECK(v(0) == cplx(1));
  CHECK(v(1) == cplx(3));
  CHECK(v(2) == cplx(2));
  CHECK(v(3) == cplx(4));
  CHECK(max_abs(unvec(v, 2) - x) == 0.0);

  // vec(A X B) = (B^T (x) A) vec(X)
  std::mt19937_64 rng(2);
  const ComplexMatrix a = testing::random_hermitian(3, rng), b = testing::random_unitary(3, rng);
  const ComplexMatrix y = testing::random_hermitian(3, rng);
  CHECK((vec(a * y * b) - kron(b.transpose(), a) * vec(y)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("outer is the rank-one projector") {
  StateVector psi(2);
  psi << cplx(1, 0) / std::sqrt(2.0), cplx(0, 1) / std::sqrt(2.0);
  const ComplexMatrix p = outer(psi);
  CHECK(max_abs(p * p - p) < 1e-15);
  CHECK(p.trace().real() == doctest::Approx(1.0));
  CHECK(std::abs(p(0, 1) - cplx(0, -0.5)) < 1e-15);
}

TEST_CASE("expm agrees with the spectral exponential of a Hermitian generator") {
  std::mt19937_64 rng(3);
  const ComplexMatrix h = testing::random_hermitian(4, rng);
  const Eigensystem es = hermitian_eigensystem(h);
  const cplx i{0.0, 1.0};
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) expected += std::exp(-i * es.values(k)) * outer(es.vectors.col(k));
  CHECK(max_abs(expm(-i * h) - expected) < 1e-12);
  CHECK(max_abs(expm(ComplexMatrix::Zero(3, 3)) - ComplexMatrix::Identity(3, 3)) == 0.0);
}
