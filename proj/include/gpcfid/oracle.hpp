#pragma once

// Brute-force verification engines. Nothing here reads a channel's spectrum:
// the searches see only a superoperator, so they check the closed forms in
// metrics.hpp from the outside.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "gpcfid/channel.hpp"
#include "gpcfid/metrics.hpp"

namespace gpcfid {

struct OracleConfig {
  int restarts = 256;
  int max_iters = 500;
  double step_tol = 1e-9;
  double value_tol = 1e-10;
  std::uint64_t seed = 0x6770636669640001ULL;
  /// Worker threads; 0 picks the hardware concurrency. Results do not depend
  /// on this value.
  int threads = 0;
  /// Called (serialized, in no particular order) for every state a search
  /// moves to. The second argument is the dual state of the nu_inf search.
  std::function<void(const StateVector&, const StateVector*)> visitor;

  static OracleConfig tensor_defaults();
  void validate() const;
};

enum class Sense { Max, Min };

struct RestartSummary {
  double value = 0.0;
  int iterations = 0;
};

struct OracleResult {
  /// Max (or min) over all restarts.
  double value = 0.0;
  /// State of the earliest restart within 1e-12 of `value`; structured seeds
  /// come first, so conjectured optima win ties.
  StateVector state;
  StateVector dual_state;  // nu_inf only
  int best_restart = 0;
  std::vector<RestartSummary> restarts;
  std::uint64_t seed = 0;
  int restart_count = 0;
};

/// Per-restart generator derived from the master seed and a counter.
std::mt19937_64 restart_rng(std::uint64_t master, std::uint64_t index);

/// Haar-random unit vector (normalized complex Gaussian).
StateVector random_pure_state(int dim, std::mt19937_64& rng);

/// Uniform point of the probability simplex on d + 2 weights (Dirichlet(1)),
/// i.e. a uniformly random generalized Pauli channel.
std::vector<double> random_probabilities(int d, std::mt19937_64& rng);

/// All MUB vectors of `fam` (n = 1) or all n-fold products of them.
std::vector<StateVector> mub_seed_states(const MubFamily& fam, int n = 1);

/// (psi_0^alpha, psi_m^alpha) for every alpha and m: both branches of the
/// nu_inf optimum are among them.
std::vector<std::pair<StateVector, StateVector>> mub_seed_pairs(const MubFamily& fam);

/// Optimizes <psi|Lambda[|psi><psi|]|psi> over unit vectors by coordinate
/// pattern search on the 2*dim real parameters with geometric step decay.
/// The first restarts start from `seeds`, the rest from Haar draws.
OracleResult oracle_self_fidelity(const GenericChannel& ch, Sense sense, const OracleConfig& cfg,
                                  std::span<const StateVector> seeds = {});

/// max sqrt(Tr Lambda[P]^2) with the same search.
OracleResult oracle_nu2(const GenericChannel& ch, const OracleConfig& cfg,
                        std::span<const StateVector> seeds = {});

/// max_{P,Q} Tr(Q Lambda[P]) by alternating top-eigenvector ascent.
OracleResult oracle_nu_inf(const GenericChannel& ch, const OracleConfig& cfg,
                           std::span<const std::pair<StateVector, StateVector>> seeds = {});

// Convenience overloads for single-copy GPCs, seeded with the channel's MUB.
OracleResult oracle_self_fidelity(const GeneralizedPauliChannel& ch, Sense sense, const OracleConfig& cfg);
OracleResult oracle_nu2(const GeneralizedPauliChannel& ch, const OracleConfig& cfg);
OracleResult oracle_nu_inf(const GeneralizedPauliChannel& ch, const OracleConfig& cfg);

struct ScanGrid {
  int random_draws = 10000;  // uniform in [-1, 1]^(d+1)
  int boundary_points = 200; // spectra on one of the two bounds
  int violations = 200;      // spectra pushed just outside a bound
  std::uint64_t seed = 1;
};

struct ScanReport {
  int count = 0;
  int disagreements = 0;
  int fujiwara_algoet_passes = 0;
  int choi_passes = 0;
  int boundary_count = 0;
  double worst_boundary_eigenvalue = 0.0;  // max |lambda_min(J)| over boundary spectra
  double worst_boundary_slack = 0.0;       // max |slack| on the touched bound
  std::vector<Spectrum> disagreeing;
};

/// Compares the Fujiwara-Algoet test with Choi positivity at tolerance `tol`.
ScanReport cptp_equivalence_scan(const MubFamily& fam, std::span<const Spectrum> spectra,
                                 double tol = 1e-10);
ScanReport cptp_equivalence_scan(const MubFamily& fam, const ScanGrid& grid, double tol = 1e-10);

/// max_{alpha,k} || S vec(U_alpha^k) - lambda_alpha vec(U_alpha^k) ||_F for a
/// superoperator and a claimed spectrum.
double eigenrelation_residual(const MubFamily& fam, const ComplexMatrix& superop, const Spectrum& claimed);
double eigenrelation_check(const GeneralizedPauliChannel& ch);

struct ProbeReport {
  int n = 2;
  double estimate = 0.0;  // lower bound on f_max(Lambda^{(x) n})
  double baseline = 0.0;  // f_max(Lambda)^n
  double excess = 0.0;    // estimate - baseline
  bool corollary_regime = false;
  OracleResult search;
};

/// Searches f_max of Lambda^{(x) n} with product-MUB seeds plus Haar restarts.
ProbeReport tensor_multiplicativity_probe(const GeneralizedPauliChannel& ch, int n,
                                          const OracleConfig& cfg);

}  // namespace gpcfid
