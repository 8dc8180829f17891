#include "gpcfid/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "gpcfid/errors.hpp"

namespace gpcfid {

double Spectrum::max() const { return *std::max_element(lambdas.begin(), lambdas.end()); }
double Spectrum::min() const { return *std::min_element(lambdas.begin(), lambdas.end()); }
double Spectrum::sum() const { return std::accumulate(lambdas.begin(), lambdas.end(), 0.0); }

FujiwaraAlgoetCheck fujiwara_algoet_check(const Spectrum& sp) {
  FujiwaraAlgoetCheck out;
  out.sum = sp.sum();
  out.lower_slack = out.sum + 1.0 / (sp.d - 1);
  out.upper_slack = 1.0 + sp.d * sp.min() - out.sum;
  return out;
}

std::vector<double> probabilities_of(const Spectrum& sp) {
  const double d = sp.d;
  const double total = sp.sum();
  std::vector<double> p(sp.lambdas.size() + 1);
  p[0] = (1.0 + (d - 1.0) * total) / (d * d);
  for (std::size_t a = 0; a < sp.lambdas.size(); ++a) {
    p[a + 1] = (d - 1.0) / (d * d) * (1.0 + d * sp.lambdas[a] - total);
  }
  return p;
}

Spectrum spectrum_from_probabilities(int d, std::span<const double> probs) {
  Spectrum sp{d, {}};
  sp.lambdas.reserve(probs.size() - 1);
  for (std::size_t a = 1; a < probs.size(); ++a) {
    sp.lambdas.push_back((d * (probs[0] + probs[a]) - 1.0) / (d - 1.0));
  }
  return sp;
}

GeneralizedPauliChannel channel_from_probabilities(int d, std::vector<double> probs,
                                                   std::shared_ptr<const MubFamily> fam) {
  if (!fam) throw Error(ErrorKind::InvalidFamily, "no MUB family given");
  if (fam->dimension() != d || fam->basis_count() != d + 1) {
    throw Error(ErrorKind::DimensionMismatch,
                "family of dimension " + std::to_string(fam->dimension()) + " with " +
                    std::to_string(fam->basis_count()) + " bases cannot carry a d=" +
                    std::to_string(d) + " channel");
  }
  if (probs.size() != static_cast<std::size_t>(d + 2)) {
    throw Error(ErrorKind::BadProbabilities, "expected " + std::to_string(d + 2) +
                                                 " weights, got " + std::to_string(probs.size()));
  }
  double total = 0.0;
  for (std::size_t a = 0; a < probs.size(); ++a) {
    if (!std::isfinite(probs[a]) || probs[a] < -1e-12) {
      std::ostringstream msg;
      msg << "p_" << a << " = " << probs[a] << " is negative";
      throw Error(ErrorKind::BadProbabilities, msg.str());
    }
    total += probs[a];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "weights sum to " << total;
    throw Error(ErrorKind::BadProbabilities, msg.str());
  }
  return GeneralizedPauliChannel(d, std::move(probs), std::move(fam));
}

GeneralizedPauliChannel channel_from_eigenvalues(int d, std::span<const double> lambdas,
                                                 std::shared_ptr<const MubFamily> fam) {
  if (lambdas.size() != static_cast<std::size_t>(d + 1)) {
    throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(d + 1) +
                                                  " eigenvalues, got " +
                                                  std::to_string(lambdas.size()));
  }
  const Spectrum sp{d, {lambdas.begin(), lambdas.end()}};
  const FujiwaraAlgoetCheck fa = fujiwara_algoet_check(sp);
  if (fa.lower_slack < -1e-12) {
    std::ostringstream msg;
    msg << "lower Fujiwara-Algoet bound violated: sum(lambda) = " << fa.sum << " < -1/(d-1) by "
        << -fa.lower_slack;
    throw NotCptpError(NotCptpError::Bound::Lower, -fa.lower_slack, msg.str());
  }
  if (fa.upper_slack < -1e-12) {
    std::ostringstream msg;
    msg << "upper Fujiwara-Algoet bound violated: sum(lambda) = " << fa.sum
        << " > 1 + d*min(lambda) = " << fa.sum + fa.upper_slack << " by " << -fa.upper_slack;
    throw NotCptpError(NotCptpError::Bound::Upper, -fa.upper_slack, msg.str());
  }
  std::vector<double> p = probabilities_of(sp);
  // Boundary spectra can round a zero weight to -1e-17; the simplex sum is
  // exact up to rounding, so renormalizing is only cosmetic.
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
  return channel_from_probabilities(d, std::move(p), std::move(fam));
}

GeneralizedPauliChannel identity_channel(std::shared_ptr<const MubFamily> fam) {
  const int d = fam->dimension();
  std::vector<double> p(d + 2, 0.0);
  p[0] = 1.0;
  return channel_from_probabilities(d, std::move(p), std::move(fam));
}

Spectrum spectrum_of(const GeneralizedPauliChannel& ch) {
  return spectrum_from_probabilities(ch.dimension(), ch.probabilities());
}

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() == 0) {
    throw Error(ErrorKind::DimensionMismatch, "density matrix must be square and nonempty");
  }
  if (!is_hermitian(rho_, kHermitianTol)) {
    throw Error(ErrorKind::NotHermitian, "density matrix is not Hermitian");
  }
  const double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > 1e-12) {
    throw Error(ErrorKind::InvalidState, "density matrix trace " + std::to_string(tr));
  }
  if (!is_psd(rho_, kStructuralTol)) {
    throw Error(ErrorKind::InvalidState, "density matrix has a negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) { return DensityMatrix(outer(psi.normalized())); }

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  return DensityMatrix(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
}

ComplexMatrix apply_channel(const GeneralizedPauliChannel& ch, const ComplexMatrix& x) {
  const int d = ch.dimension();
  if (x.rows() != d || x.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch, "operator does not act on C^" + std::to_string(d));
  }
  const auto p = ch.probabilities();
  const double dd = d;
  ComplexMatrix out = ((dd * p[0] - 1.0) / (dd - 1.0)) * x;
  for (int alpha = 1; alpha <= d + 1; ++alpha) {
    if (p[alpha] == 0.0) continue;
    ComplexMatrix dephased = ComplexMatrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
      const ComplexMatrix& proj = ch.family().projector(alpha, k);
      dephased += proj * x * proj;
    }
    out += (dd / (dd - 1.0) * p[alpha]) * dephased;
  }
  return out;
}

DensityMatrix apply_channel(const GeneralizedPauliChannel& ch, const DensityMatrix& rho) {
  ComplexMatrix out = apply_channel(ch, rho.matrix());
  // Restore exact Hermiticity lost to rounding.
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(std::move(out));
}

ComplexMatrix dephasing_superoperator(const MubFamily& fam, int alpha) {
  const int d = fam.dimension();
  ComplexMatrix dephase = ComplexMatrix::Zero(d * d, d * d);
  for (int k = 0; k < d; ++k) {
    const ComplexMatrix& proj = fam.projector(alpha, k);
    // vec(P X P) = (P^T (x) P) vec(X)
    dephase += kron(proj.transpose(), proj);
  }
  return dephase;
}

ComplexMatrix superoperator_from_probabilities(const MubFamily& fam, std::span<const double> probs) {
  const int d = fam.dimension();
  const double dd = d;
  if (probs.size() != static_cast<std::size_t>(fam.basis_count() + 1)) {
    throw Error(ErrorKind::DimensionMismatch, "need one weight per basis plus p_0");
  }
  ComplexMatrix s = ((dd * probs[0] - 1.0) / (dd - 1.0)) * ComplexMatrix::Identity(d * d, d * d);
  for (int alpha = 1; alpha < static_cast<int>(probs.size()); ++alpha) {
    s += (dd / (dd - 1.0) * probs[alpha]) * dephasing_superoperator(fam, alpha);
  }
  return s;
}

ComplexMatrix superoperator_of(const GeneralizedPauliChannel& ch) {
  return superoperator_from_probabilities(ch.family(), ch.probabilities());
}

ComplexMatrix choi_from_superoperator(const ComplexMatrix& superop, int d) {
  ComplexMatrix j = ComplexMatrix::Zero(d * d, d * d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      // Lambda[|r><c|] is column r + c*d of S.
      const ComplexMatrix image = unvec(superop.col(r + c * d), d);
      j.block(r * d, c * d, d, d) = image / static_cast<double>(d);
    }
  }
  return j;
}

ComplexMatrix choi_of(const GeneralizedPauliChannel& ch) {
  return choi_from_superoperator(superoperator_of(ch), ch.dimension());
}

namespace {

bool same_family(const MubFamily& a, const MubFamily& b) {
  if (&a == &b) return true;
  if (a.dimension() != b.dimension() || a.basis_count() != b.basis_count()) return false;
  for (int alpha = 1; alpha <= a.basis_count(); ++alpha) {
    if (a.basis(alpha) != b.basis(alpha)) return false;
  }
  return true;
}

}  // namespace

GeneralizedPauliChannel compose(const GeneralizedPauliChannel& a, const GeneralizedPauliChannel& b) {
  if (a.dimension() != b.dimension() || !same_family(a.family(), b.family())) {
    throw Error(ErrorKind::FamilyMismatch, "channels are defined over different MUB families");
  }
  Spectrum sa = spectrum_of(a);
  const Spectrum sb = spectrum_of(b);
  for (std::size_t i = 0; i < sa.lambdas.size(); ++i) sa.lambdas[i] *= sb.lambdas[i];
  std::vector<double> p = probabilities_of(sa);
  for (double& x : p) x = std::max(x, 0.0);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
  return channel_from_probabilities(a.dimension(), std::move(p), a.family_ptr());
}

ComplexMatrix GenericChannel::apply(const ComplexMatrix& x) const {
  if (x.rows() != state_dim || x.cols() != state_dim) {
    throw Error(ErrorKind::DimensionMismatch,
                "operator does not act on C^" + std::to_string(state_dim));
  }
  return unvec(superop * vec(x), state_dim);
}

GenericChannel tensor_power(const GeneralizedPauliChannel& ch, int n) {
  const long d = ch.dimension();
  if (n < 1) throw Error(ErrorKind::OutOfRange, "tensor power must be at least 1");
  long side = 1;
  for (int i = 0; i < n; ++i) {
    side *= d * d;
    if (side > kMaxSuperoperatorSide) {
      throw Error(ErrorKind::TooLarge, "superoperator side d^(2n) = " + std::to_string(d) + "^" +
                                           std::to_string(2 * n) + " exceeds " +
                                           std::to_string(kMaxSuperoperatorSide));
    }
  }
  const ComplexMatrix s = superoperator_of(ch);
  ComplexMatrix power = s;
  for (int i = 1; i < n; ++i) power = kron(power, s);

  // Factor-ordered index sum_m (r_m + c_m d) (d^2)^(n-1-m) -> composite
  // vec index R + C D with R = sum_m r_m d^(n-1-m), likewise C.
  long dim = 1;
  for (int i = 0; i < n; ++i) dim *= d;
  std::vector<long> perm(side);
  for (long idx = 0; idx < side; ++idx) {
    long rest = idx, row = 0, col = 0, weight = 1;
    for (int m = n - 1; m >= 0; --m) {
      const long pair = rest % (d * d);
      rest /= d * d;
      row += (pair % d) * weight;
      col += (pair / d) * weight;
      weight *= d;
    }
    perm[idx] = row + col * dim;
  }
  GenericChannel out{static_cast<int>(dim), ComplexMatrix(side, side)};
  for (long i = 0; i < side; ++i) {
    for (long j = 0; j < side; ++j) out.superop(perm[i], perm[j]) = power(i, j);
  }
  return out;
}

}  // namespace gpcfid
