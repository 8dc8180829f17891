#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "gpcfid/channel.hpp"
#include "gpcfid/metrics.hpp"

namespace gpcfid {

struct TrajectorySample {
  double t = 0.0;
  std::vector<double> lambdas;
};

/// A dynamical map Lambda(t) of generalized Pauli channels.
///
/// Exponential kind: constant nonnegative rates gamma_alpha for the generator
/// L = sum_alpha gamma_alpha (Phi_alpha - id). Since Phi_alpha[U_beta^k] =
/// delta_{alpha beta} U_beta^k, lambda_beta(t) = exp(-(Gamma - gamma_beta) t)
/// with Gamma = sum gamma.
///
/// Sampled kind: user-supplied eigenvalues at strictly increasing times
/// starting from t = 0 with lambda(0) = 1, interpolated linearly.
class EvolutionSpec {
 public:
  enum class Kind { ExponentialRates, SampledTrajectory };

  /// Throws InvalidTrajectory on negative/non-finite rates or a wrong count.
  static EvolutionSpec exponential(std::shared_ptr<const MubFamily> fam, std::vector<double> rates);
  /// Throws InvalidTrajectory when the samples break the invariants above.
  static EvolutionSpec sampled(std::shared_ptr<const MubFamily> fam, std::vector<TrajectorySample> samples);

  Kind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return fam_->dimension(); }
  const std::vector<double>& rates() const noexcept { return rates_; }
  const std::vector<TrajectorySample>& samples() const noexcept { return samples_; }
  const std::shared_ptr<const MubFamily>& family_ptr() const noexcept { return fam_; }

 private:
  EvolutionSpec(Kind kind, std::shared_ptr<const MubFamily> fam) : kind_(kind), fam_(std::move(fam)) {}

  Kind kind_;
  std::shared_ptr<const MubFamily> fam_;
  std::vector<double> rates_;
  std::vector<TrajectorySample> samples_;
};

/// Throws OutOfRange for t < 0 or (sampled kind) t past the last sample.
Spectrum trajectory_at(const EvolutionSpec& spec, double t);

struct TimelinePoint {
  double t = 0.0;
  Spectrum spectrum;
  FujiwaraAlgoetCheck fujiwara_algoet;
  bool valid = false;  // lambda >= -1e-12 and Fujiwara-Algoet holds
};

struct ValidationTimeline {
  std::vector<TimelinePoint> points;
  std::optional<double> first_violation;

  bool valid() const noexcept { return !first_violation.has_value(); }
};

ValidationTimeline validate_trajectory(const EvolutionSpec& spec, std::span<const double> t_grid);

/// The grid plus every sample time inside its range. A sampled trajectory is
/// piecewise linear, so checking these nodes checks the whole interval.
std::vector<double> validation_nodes(const EvolutionSpec& spec, std::span<const double> t_grid);

struct TimelineRow {
  double t = 0.0;
  FidelityReport report;
};

/// Throws InvalidTrajectory (with the first violation time) if the trajectory
/// is not a valid channel at every grid time.
std::vector<TimelineRow> timeline_report(const EvolutionSpec& spec, std::span<const double> t_grid);

/// Superoperator of sum_alpha gamma_alpha (Phi_alpha - id); exponential kind only.
ComplexMatrix generator_superoperator(const EvolutionSpec& spec);

/// exp(t L) computed by a dense matrix exponential of the assembled generator.
ComplexMatrix propagator_by_expm(const EvolutionSpec& spec, double t);

/// `steps` evenly spaced times from 0 to t_max inclusive (a single 0 when steps == 1).
std::vector<double> uniform_grid(double t_max, int steps);

}  // namespace gpcfid
