#include "gpcfid/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "gpcfid/errors.hpp"

namespace gpcfid {

EvolutionSpec EvolutionSpec::exponential(std::shared_ptr<const MubFamily> fam, std::vector<double> rates) {
  const int d = fam->dimension();
  if (rates.size() != static_cast<std::size_t>(d + 1)) {
    throw Error(ErrorKind::InvalidTrajectory,
                "expected " + std::to_string(d + 1) + " rates, got " + std::to_string(rates.size()));
  }
  for (double g : rates) {
    if (!std::isfinite(g) || g < 0.0) {
      throw Error(ErrorKind::InvalidTrajectory, "rates must be finite and nonnegative");
    }
  }
  EvolutionSpec spec(Kind::ExponentialRates, std::move(fam));
  spec.rates_ = std::move(rates);
  return spec;
}

EvolutionSpec EvolutionSpec::sampled(std::shared_ptr<const MubFamily> fam, std::vector<TrajectorySample> samples) {
  const int d = fam->dimension();
  if (samples.empty()) throw Error(ErrorKind::InvalidTrajectory, "trajectory has no samples");
  if (samples.front().t != 0.0) {
    throw Error(ErrorKind::InvalidTrajectory, "trajectory must start at t = 0");
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.lambdas.size() != static_cast<std::size_t>(d + 1)) {
      throw Error(ErrorKind::InvalidTrajectory, "sample " + std::to_string(i) + " has " +
                                                    std::to_string(s.lambdas.size()) +
                                                    " eigenvalues, expected " + std::to_string(d + 1));
    }
    if (!std::isfinite(s.t) || (i > 0 && !(s.t > samples[i - 1].t))) {
      throw Error(ErrorKind::InvalidTrajectory, "sample times must be strictly increasing");
    }
  }
  for (double l : samples.front().lambdas) {
    if (std::abs(l - 1.0) > 1e-9) {
      throw Error(ErrorKind::InvalidTrajectory, "lambda(0) must be 1 on every axis");
    }
  }
  EvolutionSpec spec(Kind::SampledTrajectory, std::move(fam));
  spec.samples_ = std::move(samples);
  return spec;
}

Spectrum trajectory_at(const EvolutionSpec& spec, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::OutOfRange, "time must be nonnegative");
  const int d = spec.dimension();
  Spectrum sp{d, std::vector<double>(d + 1)};
  if (spec.kind() == EvolutionSpec::Kind::ExponentialRates) {
    const auto& g = spec.rates();
    const double total = std::accumulate(g.begin(), g.end(), 0.0);
    for (int a = 0; a <= d; ++a) sp.lambdas[a] = std::exp(-(total - g[a]) * t);
    return sp;
  }
  const auto& s = spec.samples();
  if (t > s.back().t) {
    std::ostringstream msg;
    msg << "t = " << t << " is past the last sample at " << s.back().t;
    throw Error(ErrorKind::OutOfRange, msg.str());
  }
  const auto hi = std::lower_bound(s.begin(), s.end(), t,
                                   [](const TrajectorySample& x, double v) { return x.t < v; });
  if (hi->t == t || hi == s.begin()) {
    sp.lambdas = hi->lambdas;
    return sp;
  }
  const auto lo = hi - 1;
  const double w = (t - lo->t) / (hi->t - lo->t);
  for (int a = 0; a <= d; ++a) sp.lambdas[a] = (1.0 - w) * lo->lambdas[a] + w * hi->lambdas[a];
  return sp;
}

ValidationTimeline validate_trajectory(const EvolutionSpec& spec, std::span<const double> t_grid) {
  if (t_grid.empty()) throw Error(ErrorKind::OutOfRange, "time grid is empty");
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw Error(ErrorKind::OutOfRange, "time grid must be nondecreasing");
  }
  ValidationTimeline out;
  out.points.reserve(t_grid.size());
  for (double t : t_grid) {
    TimelinePoint p;
    p.t = t;
    p.spectrum = trajectory_at(spec, t);
    p.fujiwara_algoet = fujiwara_algoet_check(p.spectrum);
    p.valid = p.spectrum.min() >= -1e-12 && p.fujiwara_algoet.passed();
    if (!p.valid && !out.first_violation) out.first_violation = t;
    out.points.push_back(std::move(p));
  }
  return out;
}

std::vector<double> validation_nodes(const EvolutionSpec& spec, std::span<const double> t_grid) {
  std::vector<double> nodes(t_grid.begin(), t_grid.end());
  if (spec.kind() == EvolutionSpec::Kind::SampledTrajectory && !nodes.empty()) {
    const auto [lo, hi] = std::minmax_element(nodes.begin(), nodes.end());
    const double first = *lo;
    const double last = *hi;
    for (const auto& s : spec.samples()) {
      if (s.t >= first && s.t <= last) nodes.push_back(s.t);
    }
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

std::vector<TimelineRow> timeline_report(const EvolutionSpec& spec, std::span<const double> t_grid) {
  const auto nodes = validation_nodes(spec, t_grid);
  const ValidationTimeline check = validate_trajectory(spec, nodes);
  if (!check.valid()) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "trajectory leaves the channel set at t = " << *check.first_violation;
    throw Error(ErrorKind::InvalidTrajectory, msg.str());
  }
  std::vector<TimelineRow> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) {
    const Spectrum sp = trajectory_at(spec, t);
    const auto ch = channel_from_eigenvalues(spec.dimension(), sp.lambdas, spec.family_ptr());
    rows.push_back({t, fidelity_report(ch)});
  }
  return rows;
}

ComplexMatrix generator_superoperator(const EvolutionSpec& spec) {
  if (spec.kind() != EvolutionSpec::Kind::ExponentialRates) {
    throw Error(ErrorKind::InvalidTrajectory, "sampled trajectories carry no generator");
  }
  const MubFamily& fam = *spec.family_ptr();
  const int side = fam.dimension() * fam.dimension();
  ComplexMatrix gen = ComplexMatrix::Zero(side, side);
  for (int alpha = 1; alpha <= fam.basis_count(); ++alpha) {
    const double g = spec.rates()[alpha - 1];
    if (g == 0.0) continue;
    gen += g * (dephasing_superoperator(fam, alpha) - ComplexMatrix::Identity(side, side));
  }
  return gen;
}

ComplexMatrix propagator_by_expm(const EvolutionSpec& spec, double t) {
  return expm(t * generator_superoperator(spec));
}

std::vector<double> uniform_grid(double t_max, int steps) {
  if (steps < 1) throw Error(ErrorKind::OutOfRange, "need at least one time step");
  if (!(t_max >= 0.0)) throw Error(ErrorKind::OutOfRange, "t_max must be nonnegative");
  std::vector<double> grid(steps, 0.0);
  for (int i = 1; i < steps; ++i) grid[i] = t_max * i / (steps - 1);
  return grid;
}

}  // namespace gpcfid
