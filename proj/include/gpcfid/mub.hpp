#pragma once

#include <cstddef>
#include <vector>

#include "gpcfid/linalg.hpp"

namespace gpcfid {

/// A family of orthonormal bases of C^d, intended to be pairwise unbiased.
///
/// Bases are stored as d x d matrices whose column k is psi_k. User-facing
/// basis labels are 1-based (alpha = 1..count) and label 1 is whatever basis
/// comes first; for the built-in families that is the computational basis.
/// Built-in ordering:
///   d = 2:      alpha = 1, 2, 3 are the eigenbases of sigma_z, sigma_x, sigma_y
///               with psi_0 the +1 eigenvector, so U_alpha^1 is that Pauli matrix.
///   odd prime:  alpha = 1 computational; alpha = j + 1 (j = 1..d) has
///               psi_k[l] = omega^(j l^2 + k l) / sqrt(d). alpha = d + 1 is the
///               Fourier basis.
///
/// The constructor only checks shapes. Use build_mub_family or load_mub_file
/// (io.hpp) for families whose unbiasedness has been verified.
class MubFamily {
 public:
  MubFamily(int d, std::vector<ComplexMatrix> bases);

  int dimension() const noexcept { return d_; }
  int basis_count() const noexcept { return static_cast<int>(bases_.size()); }
  cplx omega() const noexcept { return omega_; }

  /// Basis matrix for label alpha (1-based).
  const ComplexMatrix& basis(int alpha) const;
  StateVector vector(int alpha, int k) const;
  /// P_k^(alpha) = |psi_k^(alpha)><psi_k^(alpha)|
  const ComplexMatrix& projector(int alpha, int k) const;

 private:
  void check_index(int alpha, int k) const;

  int d_;
  cplx omega_;
  std::vector<ComplexMatrix> bases_;
  std::vector<std::vector<ComplexMatrix>> projectors_;
};

struct MubValidation {
  double orthonormality_residual = 0.0;  // max |<psi_k|psi_l> - delta_kl|
  double unbiasedness_residual = 0.0;    // max ||<psi_k^a|psi_l^b>|^2 - 1/d|, a != b
  double tol = 0.0;

  bool passed() const noexcept {
    return orthonormality_residual <= tol && unbiasedness_residual <= tol;
  }
};

bool is_prime(int n) noexcept;

/// d + 1 mutually unbiased bases for prime d in [2, 31]. The result is
/// validated at 1e-12 before it is returned.
/// Throws Error(UnsupportedDimension) for other d.
MubFamily build_mub_family(int d);

MubValidation validate_mub_family(const MubFamily& fam, double tol = 1e-12);

/// U_alpha^k = sum_l omega^(k l) P_l^(alpha), alpha in 1..d+1, k in 1..d-1.
ComplexMatrix unbiased_unitary(const MubFamily& fam, int alpha, int k);

}  // namespace gpcfid
