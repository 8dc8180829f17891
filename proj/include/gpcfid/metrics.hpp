#pragma once

#include <optional>
#include <vector>

#include "gpcfid/channel.hpp"

namespace gpcfid {

struct OracleConfig;

/// Extremal channel fidelities. Both the eigenvalue form and the probability
/// form are returned so callers can cross-check them.
struct FidelityExtremes {
  double f_min = 0.0;
  double f_max = 0.0;
  int argmin_alpha = 1;  // lowest basis label attaining lambda_min
  int argmax_alpha = 1;  // lowest basis label attaining lambda_max
  double f_min_from_probabilities = 0.0;  // p_0 + min_{alpha>0} p_alpha
  double f_max_from_probabilities = 0.0;  // p_0 + max_{alpha>0} p_alpha
};

FidelityExtremes f_extremes(const GeneralizedPauliChannel& ch);

/// A unit vector together with (on demand) its expansion coefficients
/// x_{alpha k} = <psi| (U_alpha^k)^dagger |psi> in the unitary basis, so that
/// |psi><psi| = (1/d)(I + sum x_{alpha k} U_alpha^k).
struct PureState {
  StateVector amplitudes;
  std::optional<ComplexMatrix> coefficients;  // (d+1) x (d-1), entry (alpha-1, k-1)
};

/// Normalizes psi (throws DimensionMismatch on a zero vector) and fills the
/// coefficients against `fam`.
PureState make_pure_state(const MubFamily& fam, const StateVector& psi);

ComplexMatrix unitary_coefficients(const MubFamily& fam, const StateVector& psi);

/// Tr(P Lambda[P]) through the coefficient formula
/// (1/d)(1 + sum_alpha lambda_alpha sum_k |x_{alpha k}|^2).
double pointwise_fidelity(const GeneralizedPauliChannel& ch, const PureState& psi);

/// <psi| Lambda[|psi><psi|] |psi> by direct matrix evaluation.
double pointwise_fidelity_direct(const GeneralizedPauliChannel& ch, const StateVector& psi);

/// sqrt([1 + (d-1) max lambda^2] / d)
double nu2(const GeneralizedPauliChannel& ch);

/// (1/d) max{1 + (d-1) lambda_max, 1 - lambda_min}, the best value over
/// pairs of MUB projectors. It is the true maximum over all P, Q for d = 2 and
/// whenever lambda_max >= |lambda_min|. For d >= 3 outside that range it is
/// only a lower bound: d = 3, lambda = (-0.2, 0, 0.2, -0.35) gives 0.4667 here
/// while the maximum is 0.48810.
double nu_inf(const GeneralizedPauliChannel& ch);

/// True when nu_inf's closed form is the exact maximum (see above).
bool nu_inf_exact(const Spectrum& sp);

/// |f_max(Lambda o Lambda) - nu2(Lambda)^2|
double nu2_fmax_identity(const GeneralizedPauliChannel& ch);

struct MultiplicativityFlags {
  bool fmax_multiplicative = false;   // lambda_max >= |lambda_min|
  bool fmin_multiplicative = false;   // -lambda_min >= |lambda_max|
  bool nuinf_equals_fmax = false;     // d = 2: lambda_max >= -lambda_min; d >= 3: lambda_max >= |lambda_min|
  bool nuinf_multiplicative = false;  // the two above together
};

/// Flags are only set where the equality is proven. For d >= 3 the condition
/// lambda_max >= -lambda_min / (d-1) alone does not give nu_inf = f_max, see
/// nu_inf. Equalities count as satisfied (1e-12 slack). At |lambda_max| = |lambda_min|
/// the sign of the extreme eigenvalue decides: an all-negative flat spectrum
/// is not f_max-multiplicative and an all-positive one is not
/// f_min-multiplicative (a singlet input beats every product state).
MultiplicativityFlags multiplicativity_class(const Spectrum& sp);
MultiplicativityFlags multiplicativity_class(const GeneralizedPauliChannel& ch);

/// Which MUB projectors attain the extremal quantities. Ties go to the lowest
/// basis label.
struct Attainment {
  int argmax_alpha = 1;
  int argmin_alpha = 1;
  int nu2_alpha = 1;            // argmax lambda_alpha^2
  bool nu2_with_fmax = false;   // |lambda_max| >= |lambda_min|
  bool nu2_with_fmin = false;   // lambda_max^2 <= lambda_min^2
  bool nu_inf_positive_branch = true;  // nu_inf = f_max (P = Q) or 1 - lambda_min branch
  int nu_inf_alpha = 1;
};

Attainment attainment(const Spectrum& sp);

enum class RegularizationMode { Closed, Oracle };

/// n-th regularization of f_max. Inside the f_max-multiplicative regime the
/// value is f_max for every n (`exact`). Outside it the result is the pair
/// (f_max, nu_inf): f_max lower-bounds every f_max^(n) and nu_inf lower-bounds
/// the asymptotic limit. In oracle mode `oracle_root` holds the n-th root of
/// the tensor-power search and `lower` is the best lower bound on the
/// asymptotic value gathered over powers 1..n; it is not clipped to `upper`.
struct RegularizedFmax {
  int n = 1;
  bool exact = false;
  double value = 0.0;  // meaningful when exact
  double lower = 0.0;
  double upper = 0.0;  // nu_inf
  std::vector<double> oracle_root;  // index m-1 -> f_max(Lambda^{(x)m})^(1/m), oracle mode
};

RegularizedFmax regularized_fmax(const GeneralizedPauliChannel& ch, int n, RegularizationMode mode,
                                 const OracleConfig* cfg = nullptr);

struct FidelityReport {
  Spectrum spectrum;
  double f_min = 0.0;
  double f_max = 0.0;
  double nu2 = 0.0;
  double nu_inf = 0.0;
  bool nu_inf_exact = false;  // closed form proven to be the maximum
  MultiplicativityFlags flags;
  Attainment attainment;
  bool regularized_exact = false;  // f_max^(inf) = f_max is proven
};

FidelityReport fidelity_report(const GeneralizedPauliChannel& ch);

}  // namespace gpcfid
