#include <doctest.h>

#include <algorithm>
#include <random>

#include "gpcfid/errors.hpp"
#include "gpcfid/mub.hpp"
#include "support.hpp"

using namespace gpcfid;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::Parse;
}

ComplexMatrix matrix_power(const ComplexMatrix& u, int n) {
  ComplexMatrix r = ComplexMatrix::Identity(u.rows(), u.cols());
  for (int i = 0; i < n; ++i) r = r * u;
  return r;
}

// Same family seen through a random unitary, with the bases shuffled and each
// vector given a random phase.
MubFamily disguised(const MubFamily& fam, std::mt19937_64& rng) {
  const int d = fam.dimension();
  const ComplexMatrix v = testing::random_unitary(d, rng);
  std::uniform_real_distribution<double> phase(0.0, 6.283185307179586);
  std::vector<ComplexMatrix> bases;
  for (int a = 1; a <= fam.basis_count(); ++a) {
    ComplexMatrix b = v * fam.basis(a);
    for (int k = 0; k < d; ++k) b.col(k) *= std::polar(1.0, phase(rng));
    bases.push_back(std::move(b));
  }
  std::shuffle(bases.begin(), bases.end(), rng);
  return MubFamily(d, std::move(bases));
}

}  // namespace

TEST_CASE("built-in families are mutually unbiased for every supported prime") {
  for (int d = 2; d <= 31; ++d) {
    if (!is_prime(d)) continue;
    CAPTURE(d);
    const MubFamily fam = build_mub_family(d);
    CHECK(fam.basis_count() == d + 1);
    const MubValidation v = validate_mub_family(fam, 1e-12);
    CHECK(v.passed());
    CHECK(v.orthonormality_residual < 1e-12);
    CHECK(v.unbiasedness_residual < 1e-12);
  }
}

TEST_CASE("unsupported dimensions") {
  for (int d : {0, 1, 4, 6, 9, 37}) {
    CAPTURE(d);
    CHECK(kind_of([&] { (void)build_mub_family(d); }) == ErrorKind::UnsupportedDimension);
  }
}

TEST_CASE("qubit family is the z, x, y eigenbases") {
  const MubFamily fam = build_mub_family(2);
  CHECK(max_abs(unbiased_unitary(fam, 1, 1) - testing::pauli(3)) < 1e-15);
  CHECK(max_abs(unbiased_unitary(fam, 2, 1) - testing::pauli(1)) < 1e-15);
  CHECK(max_abs(unbiased_unitary(fam, 3, 1) - testing::pauli(2)) < 1e-15);
}

TEST_CASE("projectors resolve the identity and unitaries are powers of the first") {
  for (int d : {2, 3, 5, 7}) {
    CAPTURE(d);
    const MubFamily fam = build_mub_family(d);
    const ComplexMatrix id = ComplexMatrix::Identity(d, d);
    for (int a = 1; a <= d + 1; ++a) {
      ComplexMatrix sum = ComplexMatrix::Zero(d, d);
      for (int k = 0; k < d; ++k) {
        const ComplexMatrix& p = fam.projector(a, k);
        CHECK(max_abs(p * p - p) < 1e-12);
        sum += p;
      }
      CHECK(max_abs(sum - id) < 1e-12);

      const ComplexMatrix u1 = unbiased_unitary(fam, a, 1);
      CHECK(max_abs(matrix_power(u1, d) - id) < 1e-11);
      for (int k = 1; k < d; ++k) {
        const ComplexMatrix uk = unbiased_unitary(fam, a, k);
        CHECK(max_abs(uk - matrix_power(u1, k)) < 1e-11);
        CHECK(max_abs(uk.adjoint() - (k == d - 1 ? u1 : unbiased_unitary(fam, a, d - k))) < 1e-12);
        CHECK(max_abs(uk.adjoint() * uk - id) < 1e-12);
      }
    }
  }
}

TEST_CASE("qutrit unitaries cube to the identity and are trace-orthogonal") {
  const MubFamily fam = build_mub_family(3);
  double worst = 0.0;
  for (int a = 1; a <= 4; ++a) {
    for (int k = 1; k <= 2; ++k) {
      const ComplexMatrix u = unbiased_unitary(fam, a, k);
      CHECK(max_abs(u * u * u - ComplexMatrix::Identity(3, 3)) < 1e-12);
      CHECK(std::abs(u.trace()) < 1e-12);
      for (int b = 1; b <= 4; ++b)
        for (int l = 1; l <= 2; ++l) {
          const cplx t = (u.adjoint() * unbiased_unitary(fam, b, l)).trace();
          worst = std::max(worst, std::abs(t - cplx(a == b && k == l ? 3.0 : 0.0)));
        }
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("a disguised family is still a valid MUB") {
  std::mt19937_64 rng(7);
  const MubFamily fam = disguised(build_mub_family(3), rng);
  CHECK(validate_mub_family(fam, 1e-12).passed());
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b)
      CHECK(std::abs((unbiased_unitary(fam, a, 1).adjoint() * unbiased_unitary(fam, b, 2)).trace()) < 1e-10);
}

TEST_CASE("validation reports a rotated basis") {
  const MubFamily good = build_mub_family(5);
  std::vector<ComplexMatrix> bases;
  for (int a = 1; a <= 6; ++a) bases.push_back(good.basis(a));
  const double c = std::cos(1e-4), s = std::sin(1e-4);
  const StateVector v0 = bases[3].col(0), v1 = bases[3].col(1);
  bases[3].col(0) = c * v0 + s * v1;
  bases[3].col(1) = -s * v0 + c * v1;
  const MubValidation v = validate_mub_family(MubFamily(5, bases), 1e-12);
  CHECK_FALSE(v.passed());
  CHECK(v.orthonormality_residual < 1e-12);
  CHECK(v.unbiasedness_residual > 1e-6);

  bases[3].col(0) *= 1.001;
  CHECK(validate_mub_family(MubFamily(5, bases), 1e-12).orthonormality_residual > 1e-4);
}

TEST_CASE("index and shape errors") {
  const MubFamily fam = build_mub_family(3);
  CHECK(kind_of([&] { (void)fam.basis(0); }) == ErrorKind::IndexOutOfRange);
  CHECK(kind_of([&] { (void)fam.basis(5); }) == ErrorKind::IndexOutOfRange);
  CHECK(kind_of([&] { (void)fam.vector(1, 3); }) == ErrorKind::IndexOutOfRange);
  CHECK(kind_of([&] { (void)fam.projector(2, -1); }) == ErrorKind::IndexOutOfRange);
  CHECK(kind_of([&] { (void)unbiased_unitary(fam, 1, 0); }) == ErrorKind::IndexOutOfRange);
  CHECK(kind_of([&] { (void)unbiased_unitary(fam, 1, 3); }) == ErrorKind::IndexOutOfRange);
  CHECK(kind_of([&] { MubFamily(3, {ComplexMatrix::Identity(2, 2)}); }) == ErrorKind::InvalidFamily);
  CHECK(kind_of([&] { MubFamily(3, {}); }) == ErrorKind::InvalidFamily);
  CHECK(kind_of([&] { MubFamily(1, {ComplexMatrix::Identity(1, 1)}); }) == ErrorKind::UnsupportedDimension);
}

TEST_CASE("is_prime") {
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(1));
  CHECK(is_prime(2));
  CHECK(is_prime(31));
  CHECK_FALSE(is_prime(33));
}
