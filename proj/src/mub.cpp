#include "gpcfid/mub.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gpcfid/errors.hpp"

namespace gpcfid {

namespace {

cplx root_of_unity(long long exponent, int d) {
  const long long e = ((exponent % d) + d) % d;
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / d);
}

}  // namespace

MubFamily::MubFamily(int d, std::vector<ComplexMatrix> bases)
    : d_(d), omega_(d > 0 ? root_of_unity(1, d) : cplx{1.0}), bases_(std::move(bases)) {
  if (d < 2) throw Error(ErrorKind::UnsupportedDimension, "dimension must be at least 2");
  if (bases_.empty()) throw Error(ErrorKind::InvalidFamily, "family has no bases");
  projectors_.reserve(bases_.size());
  for (const auto& b : bases_) {
    if (b.rows() != d || b.cols() != d) {
      throw Error(ErrorKind::InvalidFamily, "every basis must be a " + std::to_string(d) + "x" +
                                                std::to_string(d) + " matrix of column vectors");
    }
    std::vector<ComplexMatrix> ps;
    ps.reserve(d);
    for (int k = 0; k < d; ++k) ps.push_back(outer(b.col(k)));
    projectors_.push_back(std::move(ps));
  }
}

void MubFamily::check_index(int alpha, int k) const {
  if (alpha < 1 || alpha > basis_count() || k < 0 || k >= d_) {
    throw Error(ErrorKind::IndexOutOfRange, "basis label " + std::to_string(alpha) +
                                                ", vector " + std::to_string(k));
  }
}

const ComplexMatrix& MubFamily::basis(int alpha) const {
  check_index(alpha, 0);
  return bases_[alpha - 1];
}

StateVector MubFamily::vector(int alpha, int k) const {
  check_index(alpha, k);
  return bases_[alpha - 1].col(k);
}

const ComplexMatrix& MubFamily::projector(int alpha, int k) const {
  check_index(alpha, k);
  return projectors_[alpha - 1][k];
}

bool is_prime(int n) noexcept {
  if (n < 2) return false;
  for (int f = 2; f * f <= n; ++f) {
    if (n % f == 0) return false;
  }
  return true;
}

MubFamily build_mub_family(int d) {
  if (!is_prime(d) || d > 31) {
    throw Error(ErrorKind::UnsupportedDimension,
                "built-in construction covers primes 2..31, got " + std::to_string(d) +
                    "; supply a MUB file for other dimensions");
  }
  std::vector<ComplexMatrix> bases;
  bases.push_back(ComplexMatrix::Identity(d, d));
  if (d == 2) {
    const double s = 1.0 / std::sqrt(2.0);
    const cplx i{0.0, 1.0};
    ComplexMatrix x(2, 2), y(2, 2);
    x << s, s, s, -s;
    y << s, s, s * i, -s * i;
    bases.push_back(x);
    bases.push_back(y);
  } else {
    const double norm = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 1; j <= d; ++j) {
      ComplexMatrix b(d, d);
      for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) {
          b(l, k) = norm * root_of_unity(static_cast<long long>(j) * l * l + static_cast<long long>(k) * l, d);
        }
      }
      bases.push_back(std::move(b));
    }
  }
  MubFamily fam(d, std::move(bases));
  const MubValidation report = validate_mub_family(fam, 1e-12);
  if (!report.passed()) {
    throw Error(ErrorKind::InvalidFamily,
                "built-in family failed validation (orthonormality " +
                    std::to_string(report.orthonormality_residual) + ", unbiasedness " +
                    std::to_string(report.unbiasedness_residual) + ")");
  }
  return fam;
}

MubValidation validate_mub_family(const MubFamily& fam, double tol) {
  MubValidation out;
  out.tol = tol;
  const int d = fam.dimension();
  const int count = fam.basis_count();
  for (int a = 1; a <= count; ++a) {
    const ComplexMatrix gram = fam.basis(a).adjoint() * fam.basis(a);
    out.orthonormality_residual =
        std::max(out.orthonormality_residual, max_abs(gram - ComplexMatrix::Identity(d, d)));
  }
  for (int a = 1; a <= count; ++a) {
    for (int b = a + 1; b <= count; ++b) {
      const ComplexMatrix overlaps = fam.basis(a).adjoint() * fam.basis(b);
      const double dev = (overlaps.cwiseAbs2().array() - 1.0 / d).abs().maxCoeff();
      out.unbiasedness_residual = std::max(out.unbiasedness_residual, dev);
    }
  }
  return out;
}

ComplexMatrix unbiased_unitary(const MubFamily& fam, int alpha, int k) {
  const int d = fam.dimension();
  if (alpha < 1 || alpha > fam.basis_count() || k < 1 || k > d - 1) {
    throw Error(ErrorKind::IndexOutOfRange,
                "U_alpha^k needs alpha in 1.." + std::to_string(fam.basis_count()) +
                    " and k in 1.." + std::to_string(d - 1));
  }
  ComplexMatrix u = ComplexMatrix::Zero(d, d);
  for (int l = 0; l < d; ++l) {
    u += root_of_unity(static_cast<long long>(k) * l, d) * fam.projector(alpha, l);
  }
  return u;
}

}  // namespace gpcfid
