#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "gpcfid/channel.hpp"
#include "gpcfid/linalg.hpp"
#include "gpcfid/mub.hpp"
#include "gpcfid/oracle.hpp"

namespace testing {

using namespace gpcfid;

inline std::shared_ptr<const MubFamily> family(int d) {
  return std::make_shared<const MubFamily>(build_mub_family(d));
}

inline GeneralizedPauliChannel random_channel(const std::shared_ptr<const MubFamily>& fam, std::mt19937_64& rng) {
  const int d = fam->dimension();
  return channel_from_probabilities(d, random_probabilities(d, rng), fam);
}

inline ComplexMatrix random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = {g(rng), g(rng)};
  return 0.5 * (a + a.adjoint());
}

inline ComplexMatrix random_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = {g(rng), g(rng)};
  Eigen::HouseholderQR<ComplexMatrix> qr(a);
  return qr.householderQ();
}

// Pauli matrices, written out by hand.
inline ComplexMatrix pauli(int i) {
  ComplexMatrix s(2, 2);
  const cplx I{0.0, 1.0};
  switch (i) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, -I, I, 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: s << 1, 0, 0, 1; break;
  }
  return s;
}

// d = 2 channel in Kraus form p0 X + sum_i p_i sigma_i X sigma_i. The built-in
// qubit family lists the z, x, y eigenbases in that order, so p_1 goes with
// sigma_z, p_2 with sigma_x and p_3 with sigma_y.
inline ComplexMatrix pauli_kraus_apply(const std::vector<double>& p, const ComplexMatrix& x) {
  const int sigma_of_alpha[4] = {0, 3, 1, 2};
  ComplexMatrix out = p[0] * x;
  for (int a = 1; a <= 3; ++a) {
    const ComplexMatrix s = pauli(sigma_of_alpha[a]);
    out += p[a] * s * x * s;
  }
  return out;
}

}  // namespace testing
