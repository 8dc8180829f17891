#include "gpcfid/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "gpcfid/errors.hpp"

namespace gpcfid {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double hermiticity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = i; j < a.cols(); ++j) {
      worst = std::max(worst, std::abs(a(i, j) - std::conj(a(j, i))));
    }
  }
  return worst;
}

bool is_hermitian(const ComplexMatrix& a, double tol) { return hermiticity_defect(a) <= tol; }

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

namespace {

void require_hermitian(const ComplexMatrix& h, double tol) {
  const double defect = hermiticity_defect(h);
  if (!(defect <= tol)) {
    throw Error(ErrorKind::NotHermitian,
                "symmetry defect " + std::to_string(defect) + " exceeds " + std::to_string(tol));
  }
}

}  // namespace

Eigensystem hermitian_eigensystem(const ComplexMatrix& h, double tol) {
  require_hermitian(h, tol);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::ComputeEigenvectors);
  const Eigen::Index n = h.rows();
  Eigensystem out{RealVector(n), ComplexMatrix(n, n)};
  // Eigen sorts ascending.
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

RealVector hermitian_eigenvalues(const ComplexMatrix& h, double tol) {
  require_hermitian(h, tol);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().reverse();
}

bool is_psd(const ComplexMatrix& h, double tol) {
  const RealVector w = hermitian_eigenvalues(h);
  return w.size() == 0 || w(w.size() - 1) >= -tol;
}

ComplexMatrix outer(const StateVector& psi) { return psi * psi.adjoint(); }

StateVector vec(const ComplexMatrix& x) {
  return Eigen::Map<const StateVector>(x.data(), x.size());
}

ComplexMatrix unvec(const StateVector& v, Eigen::Index rows) {
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, v.size() / rows);
}

ComplexMatrix expm(const ComplexMatrix& a) { return a.exp(); }

}  // namespace gpcfid
