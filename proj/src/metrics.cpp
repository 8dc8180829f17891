#include "gpcfid/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gpcfid/errors.hpp"
#include "gpcfid/oracle.hpp"

namespace gpcfid {

namespace {

constexpr double kFlagSlack = 1e-12;

// Lowest 1-based label attaining the extreme under `better`.
template <typename Better>
int arg_extreme(const std::vector<double>& xs, Better better) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (better(xs[i], xs[best])) best = i;
  }
  return static_cast<int>(best) + 1;
}

}  // namespace

FidelityExtremes f_extremes(const GeneralizedPauliChannel& ch) {
  const Spectrum sp = spectrum_of(ch);
  const double d = ch.dimension();
  FidelityExtremes out;
  out.argmax_alpha = arg_extreme(sp.lambdas, std::greater<>{});
  out.argmin_alpha = arg_extreme(sp.lambdas, std::less<>{});
  out.f_max = (1.0 + (d - 1.0) * sp.lambdas[out.argmax_alpha - 1]) / d;
  out.f_min = (1.0 + (d - 1.0) * sp.lambdas[out.argmin_alpha - 1]) / d;

  const auto p = ch.probabilities();
  const auto [lo, hi] = std::minmax_element(p.begin() + 1, p.end());
  out.f_min_from_probabilities = p[0] + *lo;
  out.f_max_from_probabilities = p[0] + *hi;
  return out;
}

ComplexMatrix unitary_coefficients(const MubFamily& fam, const StateVector& psi) {
  const int d = fam.dimension();
  if (psi.size() != d) {
    throw Error(ErrorKind::DimensionMismatch, "state is not in C^" + std::to_string(d));
  }
  ComplexMatrix x(fam.basis_count(), d - 1);
  for (int alpha = 1; alpha <= fam.basis_count(); ++alpha) {
    for (int k = 1; k < d; ++k) {
      const ComplexMatrix u = unbiased_unitary(fam, alpha, k);
      x(alpha - 1, k - 1) = psi.dot(u.adjoint() * psi);
    }
  }
  return x;
}

PureState make_pure_state(const MubFamily& fam, const StateVector& psi) {
  const double norm = psi.norm();
  if (!(norm > 0.0)) throw Error(ErrorKind::DimensionMismatch, "zero vector is not a state");
  PureState out{psi / norm, std::nullopt};
  out.coefficients = unitary_coefficients(fam, out.amplitudes);
  return out;
}

double pointwise_fidelity(const GeneralizedPauliChannel& ch, const PureState& psi) {
  const int d = ch.dimension();
  if (psi.amplitudes.size() != d) {
    throw Error(ErrorKind::DimensionMismatch, "state is not in C^" + std::to_string(d));
  }
  const ComplexMatrix x =
      psi.coefficients ? *psi.coefficients : unitary_coefficients(ch.family(), psi.amplitudes);
  const Spectrum sp = spectrum_of(ch);
  double acc = 1.0;
  for (int alpha = 0; alpha < x.rows(); ++alpha) {
    acc += sp.lambdas[alpha] * x.row(alpha).squaredNorm();
  }
  return acc / d;
}

double pointwise_fidelity_direct(const GeneralizedPauliChannel& ch, const StateVector& psi) {
  const StateVector unit = psi.normalized();
  const ComplexMatrix out = apply_channel(ch, outer(unit));
  return unit.dot(out * unit).real();
}

double nu2(const GeneralizedPauliChannel& ch) {
  const Spectrum sp = spectrum_of(ch);
  double sq = 0.0;
  for (double l : sp.lambdas) sq = std::max(sq, l * l);
  const double d = sp.d;
  return std::sqrt((1.0 + (d - 1.0) * sq) / d);
}

double nu_inf(const GeneralizedPauliChannel& ch) {
  const Spectrum sp = spectrum_of(ch);
  const double d = sp.d;
  return std::max(1.0 + (d - 1.0) * sp.max(), 1.0 - sp.min()) / d;
}

double nu2_fmax_identity(const GeneralizedPauliChannel& ch) {
  // GPCs over one family are self-adjoint, so Lambda^dagger Lambda = Lambda o Lambda.
  const double lhs = f_extremes(compose(ch, ch)).f_max;
  const double rhs = nu2(ch);
  return std::abs(lhs - rhs * rhs);
}

bool nu_inf_exact(const Spectrum& sp) { return sp.d == 2 || sp.max() >= std::abs(sp.min()) - kFlagSlack; }

MultiplicativityFlags multiplicativity_class(const Spectrum& sp) {
  const double hi = sp.max();
  const double lo = sp.min();
  MultiplicativityFlags f;
  f.fmax_multiplicative = hi >= std::abs(lo) - kFlagSlack;
  f.fmin_multiplicative = -lo >= std::abs(hi) - kFlagSlack;
  f.nuinf_equals_fmax = sp.d == 2 ? hi >= -lo - kFlagSlack : f.fmax_multiplicative;
  f.nuinf_multiplicative = f.fmax_multiplicative && f.nuinf_equals_fmax;
  return f;
}

MultiplicativityFlags multiplicativity_class(const GeneralizedPauliChannel& ch) {
  return multiplicativity_class(spectrum_of(ch));
}

Attainment attainment(const Spectrum& sp) {
  Attainment a;
  a.argmax_alpha = arg_extreme(sp.lambdas, std::greater<>{});
  a.argmin_alpha = arg_extreme(sp.lambdas, std::less<>{});
  std::vector<double> sq(sp.lambdas.size());
  std::transform(sp.lambdas.begin(), sp.lambdas.end(), sq.begin(), [](double l) { return l * l; });
  a.nu2_alpha = arg_extreme(sq, std::greater<>{});
  const double hi = sp.max();
  const double lo = sp.min();
  a.nu2_with_fmax = std::abs(hi) >= std::abs(lo) - kFlagSlack;
  a.nu2_with_fmin = hi * hi <= lo * lo + kFlagSlack;
  a.nu_inf_positive_branch = (sp.d - 1) * hi >= -lo - kFlagSlack;
  a.nu_inf_alpha = a.nu_inf_positive_branch ? a.argmax_alpha : a.argmin_alpha;
  return a;
}

RegularizedFmax regularized_fmax(const GeneralizedPauliChannel& ch, int n, RegularizationMode mode,
                                 const OracleConfig* cfg) {
  if (n < 1) throw Error(ErrorKind::OutOfRange, "regularization order must be at least 1");
  RegularizedFmax out;
  out.n = n;
  const double fmax = f_extremes(ch).f_max;
  out.exact = multiplicativity_class(ch).fmax_multiplicative;
  out.value = fmax;
  out.lower = fmax;
  out.upper = nu_inf(ch);
  if (mode == RegularizationMode::Oracle) {
    const OracleConfig config = cfg ? *cfg : OracleConfig::tensor_defaults();
    out.oracle_root.push_back(fmax);
    for (int m = 2; m <= n; ++m) {
      const ProbeReport probe = tensor_multiplicativity_probe(ch, m, config);
      const double root = std::pow(std::max(probe.estimate, 0.0), 1.0 / m);
      out.oracle_root.push_back(root);
      out.lower = std::max(out.lower, root);
    }
  }
  return out;
}

FidelityReport fidelity_report(const GeneralizedPauliChannel& ch) {
  FidelityReport r;
  r.spectrum = spectrum_of(ch);
  const FidelityExtremes fx = f_extremes(ch);
  r.f_min = fx.f_min;
  r.f_max = fx.f_max;
  r.nu2 = nu2(ch);
  r.nu_inf = nu_inf(ch);
  r.nu_inf_exact = nu_inf_exact(r.spectrum);
  r.flags = multiplicativity_class(r.spectrum);
  r.attainment = attainment(r.spectrum);
  r.regularized_exact = r.flags.fmax_multiplicative;
  return r;
}

}  // namespace gpcfid
