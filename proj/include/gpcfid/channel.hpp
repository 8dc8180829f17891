#pragma once

#include <memory>
#include <span>
#include <vector>

#include "gpcfid/linalg.hpp"
#include "gpcfid/mub.hpp"

namespace gpcfid {

/// Channel eigenvalues lambda_1..lambda_{d+1}; lambdas[alpha - 1] belongs to
/// basis alpha and is (d-1)-fold degenerate.
struct Spectrum {
  int d = 0;
  std::vector<double> lambdas;

  double max() const;
  double min() const;
  double sum() const;
};

/// Slacks of -1/(d-1) <= sum(lambda) <= 1 + d min(lambda). Negative slack
/// means the corresponding bound is violated.
struct FujiwaraAlgoetCheck {
  double sum = 0.0;
  double lower_slack = 0.0;  // sum + 1/(d-1)
  double upper_slack = 0.0;  // 1 + d min - sum

  bool passed(double tol = 1e-12) const noexcept {
    return lower_slack >= -tol && upper_slack >= -tol;
  }
};

FujiwaraAlgoetCheck fujiwara_algoet_check(const Spectrum& sp);

/// Probability weights p_0..p_{d+1} for a spectrum (no validation; weights are
/// negative exactly when the spectrum violates Fujiwara-Algoet).
std::vector<double> probabilities_of(const Spectrum& sp);

/// lambda_alpha = [d (p_0 + p_alpha) - 1] / (d - 1)
Spectrum spectrum_from_probabilities(int d, std::span<const double> probs);

/// Generalized Pauli channel over a fixed MUB family. Immutable; the
/// probability vector is the stored ground truth and is always CPTP.
class GeneralizedPauliChannel {
 public:
  int dimension() const noexcept { return d_; }
  std::span<const double> probabilities() const noexcept { return probs_; }
  const MubFamily& family() const noexcept { return *fam_; }
  const std::shared_ptr<const MubFamily>& family_ptr() const noexcept { return fam_; }

 private:
  GeneralizedPauliChannel(int d, std::vector<double> probs, std::shared_ptr<const MubFamily> fam)
      : d_(d), probs_(std::move(probs)), fam_(std::move(fam)) {}

  friend GeneralizedPauliChannel channel_from_probabilities(int, std::vector<double>,
                                                             std::shared_ptr<const MubFamily>);

  int d_;
  std::vector<double> probs_;
  std::shared_ptr<const MubFamily> fam_;
};

/// Throws BadProbabilities (length, negativity beyond 1e-12, |sum - 1| > 1e-12)
/// or DimensionMismatch when the family does not fit d.
GeneralizedPauliChannel channel_from_probabilities(int d, std::vector<double> probs,
                                                   std::shared_ptr<const MubFamily> fam);

/// Inverse relations p(lambda); throws NotCptpError naming the failed bound.
GeneralizedPauliChannel channel_from_eigenvalues(int d, std::span<const double> lambdas,
                                                 std::shared_ptr<const MubFamily> fam);

GeneralizedPauliChannel identity_channel(std::shared_ptr<const MubFamily> fam);

Spectrum spectrum_of(const GeneralizedPauliChannel& ch);

/// A validated state: Hermitian within 1e-12, unit trace within 1e-12, PSD
/// within 1e-10.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix rho);

  static DensityMatrix pure(const StateVector& psi);
  static DensityMatrix maximally_mixed(int d);

  const ComplexMatrix& matrix() const noexcept { return rho_; }
  Eigen::Index dimension() const noexcept { return rho_.rows(); }

 private:
  ComplexMatrix rho_;
};

/// Lambda[X] for an arbitrary operator X via the Phi_alpha definition.
ComplexMatrix apply_channel(const GeneralizedPauliChannel& ch, const ComplexMatrix& x);
DensityMatrix apply_channel(const GeneralizedPauliChannel& ch, const DensityMatrix& rho);

/// S with vec(Lambda[X]) = S vec(X), column-stacking vec.
ComplexMatrix superoperator_of(const GeneralizedPauliChannel& ch);

/// Superoperator of Phi_alpha[X] = sum_k P_k^(alpha) X P_k^(alpha).
ComplexMatrix dephasing_superoperator(const MubFamily& fam, int alpha);

/// Superoperator assembled from raw weights with no CPTP or simplex check;
/// used to probe maps outside the channel set.
ComplexMatrix superoperator_from_probabilities(const MubFamily& fam, std::span<const double> probs);

/// J = (id (x) Lambda)[|Omega><Omega|] with |Omega> = sum_i |ii>/sqrt(d), so Tr J = 1.
ComplexMatrix choi_of(const GeneralizedPauliChannel& ch);
ComplexMatrix choi_from_superoperator(const ComplexMatrix& superop, int d);

/// a o b. Spectra multiply elementwise. Throws FamilyMismatch.
GeneralizedPauliChannel compose(const GeneralizedPauliChannel& a, const GeneralizedPauliChannel& b);

/// A linear map given only by its superoperator (column-stacking vec).
struct GenericChannel {
  int state_dim = 0;
  ComplexMatrix superop;

  ComplexMatrix apply(const ComplexMatrix& x) const;
};

/// Largest superoperator side accepted by tensor_power and the oracles.
inline constexpr long kMaxSuperoperatorSide = 4096;

/// Lambda^{(x) n} acting on the d^n-dimensional space. Internally the n-fold
/// Kronecker power of S, reindexed so that it acts on vec of the composite
/// operator. Throws TooLarge when d^(2n) > 4096.
GenericChannel tensor_power(const GeneralizedPauliChannel& ch, int n);

}  // namespace gpcfid
