#pragma once

// Dense complex matrix helpers. Every operator in the library (states,
// projectors, unitaries, superoperators, Choi matrices) is an Eigen::MatrixXcd;
// the functions here never mutate their arguments.

#include <complex>

#include <Eigen/Dense>

namespace gpcfid {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Entrywise symmetry tolerance for Hermitian inputs.
inline constexpr double kHermitianTol = 1e-12;
/// Default tolerance for structural checks (PSD, unitarity, reconstructions).
inline constexpr double kStructuralTol = 1e-10;
/// Default tolerance when comparing optimizer output to closed forms.
inline constexpr double kOptimizationTol = 1e-6;

/// Kronecker product; the first factor indexes the most significant digit.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// max_ij |A_ij - conj(A_ji)|, or +inf for non-square input.
double hermiticity_defect(const ComplexMatrix& a);

bool is_hermitian(const ComplexMatrix& a, double tol = kHermitianTol);

/// Largest entry magnitude.
double max_abs(const ComplexMatrix& a);

struct Eigensystem {
  RealVector values;     // descending
  ComplexMatrix vectors; // orthonormal columns, matching `values`
};

/// Spectral decomposition h = V diag(w) V^dagger with w sorted descending.
/// Throws Error(NotHermitian) when hermiticity_defect(h) > tol.
Eigensystem hermitian_eigensystem(const ComplexMatrix& h, double tol = kHermitianTol);

/// Eigenvalues only, descending.
RealVector hermitian_eigenvalues(const ComplexMatrix& h, double tol = kHermitianTol);

/// True iff the smallest eigenvalue of h is >= -tol.
bool is_psd(const ComplexMatrix& h, double tol = kStructuralTol);

/// |psi><psi|
ComplexMatrix outer(const StateVector& psi);

/// Column-stacking vectorization: vec(X)[r + c*rows] = X(r, c).
StateVector vec(const ComplexMatrix& x);
ComplexMatrix unvec(const StateVector& v, Eigen::Index rows);

/// Matrix exponential (scaling and squaring with Pade approximants).
ComplexMatrix expm(const ComplexMatrix& a);

}  // namespace gpcfid
