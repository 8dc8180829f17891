#include "gpcfid/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "gpcfid/errors.hpp"

namespace gpcfid {

namespace {

// A move is accepted only if it beats the incumbent by more than rounding noise.
constexpr double kAcceptMargin = 1e-15;
// Restarts within this distance of the best value count as ties.
constexpr double kTieTol = 1e-12;
constexpr int kMaxOracleDim = 64;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void check_oracle_size(const GenericChannel& ch) {
  if (ch.state_dim < 1 || ch.state_dim > kMaxOracleDim) {
    throw Error(ErrorKind::TooLarge, "oracle searches support state dimension <= " +
                                         std::to_string(kMaxOracleDim) + ", got " +
                                         std::to_string(ch.state_dim));
  }
  const Eigen::Index side = static_cast<Eigen::Index>(ch.state_dim) * ch.state_dim;
  if (ch.superop.rows() != side || ch.superop.cols() != side) {
    throw Error(ErrorKind::DimensionMismatch, "superoperator does not match the state dimension");
  }
}

ComplexMatrix top_hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

struct Outcome {
  double value = 0.0;
  int iterations = 0;
  StateVector state;
  StateVector dual;
};

// Runs `count` independent restarts on a small thread pool. Each restart only
// touches its own slot, so the output does not depend on the schedule.
template <typename RunOne>
std::vector<Outcome> run_restarts(int count, int threads, RunOne run_one) {
  std::vector<Outcome> out(count);
  int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(count, 1));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) out[i] = run_one(i);
    return out;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          out[i] = run_one(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

OracleResult merge(std::vector<Outcome> outcomes, Sense sense, const OracleConfig& cfg) {
  OracleResult r;
  r.seed = cfg.seed;
  r.restart_count = static_cast<int>(outcomes.size());
  double best = outcomes.front().value;
  for (const auto& o : outcomes) {
    best = sense == Sense::Max ? std::max(best, o.value) : std::min(best, o.value);
  }
  r.value = best;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const double v = outcomes[i].value;
    if ((sense == Sense::Max && v >= best - kTieTol) || (sense == Sense::Min && v <= best + kTieTol)) {
      r.best_restart = static_cast<int>(i);
      break;
    }
  }
  r.restarts.reserve(outcomes.size());
  for (const auto& o : outcomes) r.restarts.push_back({o.value, o.iterations});
  r.state = std::move(outcomes[r.best_restart].state);
  r.dual_state = std::move(outcomes[r.best_restart].dual);
  return r;
}

// Serializes the user's visitor across worker threads.
class Visitor {
 public:
  explicit Visitor(const OracleConfig& cfg) : fn_(cfg.visitor) {}
  void operator()(const StateVector& s, const StateVector* dual) {
    if (!fn_) return;
    std::lock_guard lock(mutex_);
    fn_(s, dual);
  }

 private:
  const std::function<void(const StateVector&, const StateVector*)>& fn_;
  std::mutex mutex_;
};

// Coordinate pattern search for q(psi) = v^dagger H v / |psi|^4 with
// v = vec(|psi><psi|) = conj(psi) (x) psi. A single-coordinate move changes
// 2D-1 entries of v, so trial values are updated in O(D^2) instead of O(D^4).
class QuarticSearch {
 public:
  QuarticSearch(const ComplexMatrix& h, int dim) : h_(h), dim_(dim) {}

  Outcome run(const StateVector& start, double sign, const OracleConfig& cfg, Visitor& visit) const {
    State st;
    st.psi = start.normalized();
    st.idx.resize(2 * dim_ - 1);
    st.delta.resize(2 * dim_ - 1);
    double step = 0.25;
    int sweeps = 0;
    while (sweeps < cfg.max_iters) {
      refresh(st);
      ++sweeps;
      bool improved = false;
      for (int m = 0; m < dim_; ++m) {
        for (const cplx dir : {cplx{1.0, 0.0}, cplx{0.0, 1.0}}) {
          for (const double sgn : {1.0, -1.0}) {
            const cplx delta = sgn * step * dir;
            double norm2 = 0.0;
            const double trial = trial_value(st, m, delta, norm2);
            if (sign * (trial - st.value) > kAcceptMargin) {
              accept(st, m, delta, norm2);
              visit(st.psi, nullptr);
              improved = true;
              break;
            }
          }
        }
      }
      if (!improved) {
        step *= 0.5;
        if (step < cfg.step_tol) break;
      }
    }
    refresh(st);
    return {st.value, sweeps, st.psi, {}};
  }

 private:
  struct State {
    StateVector psi;
    StateVector v;
    StateVector w;  // H v
    double value = 0.0;
    std::vector<Eigen::Index> idx;
    std::vector<cplx> delta;
  };

  void refresh(State& st) const {
    const double n = st.psi.norm();
    st.psi /= n;
    st.v.resize(dim_ * dim_);
    for (int c = 0; c < dim_; ++c) {
      for (int r = 0; r < dim_; ++r) st.v(r + c * dim_) = st.psi(r) * std::conj(st.psi(c));
    }
    st.w = h_ * st.v;
    st.value = st.v.dot(st.w).real();
  }

  // Fills st.idx/st.delta with the sparse change of v for psi_m += delta and
  // returns the normalized objective of the moved state.
  double trial_value(State& st, int m, cplx delta, double& norm2) const {
    const cplx pm = st.psi(m);
    std::size_t n = 0;
    for (int c = 0; c < dim_; ++c) {
      if (c == m) continue;
      st.idx[n] = m + c * dim_;
      st.delta[n++] = delta * std::conj(st.psi(c));
    }
    for (int r = 0; r < dim_; ++r) {
      if (r == m) continue;
      st.idx[n] = r + m * dim_;
      st.delta[n++] = st.psi(r) * std::conj(delta);
    }
    st.idx[n] = m + m * dim_;
    st.delta[n++] = std::norm(pm + delta) - std::norm(pm);

    double num = st.value;
    for (std::size_t i = 0; i < n; ++i) num += 2.0 * (std::conj(st.delta[i]) * st.w(st.idx[i])).real();
    for (std::size_t i = 0; i < n; ++i) {
      cplx row{0.0, 0.0};
      for (std::size_t j = 0; j < n; ++j) row += h_(st.idx[i], st.idx[j]) * st.delta[j];
      num += (std::conj(st.delta[i]) * row).real();
    }
    norm2 = 1.0 + 2.0 * (std::conj(pm) * delta).real() + std::norm(delta);
    return num / (norm2 * norm2);
  }

  void accept(State& st, int m, cplx delta, double norm2) const {
    for (std::size_t i = 0; i < st.idx.size(); ++i) {
      st.v(st.idx[i]) += st.delta[i];
      st.w += h_.col(st.idx[i]) * st.delta[i];
    }
    st.psi(m) += delta;
    st.psi /= std::sqrt(norm2);
    st.v /= norm2;
    st.w /= norm2;
    st.value = st.v.dot(st.w).real();
  }

  const ComplexMatrix& h_;
  int dim_;
};

StateVector start_state(int i, std::span<const StateVector> seeds, const OracleConfig& cfg, int dim) {
  if (i < static_cast<int>(seeds.size())) {
    if (seeds[i].size() != dim) throw Error(ErrorKind::DimensionMismatch, "seed state has wrong size");
    return seeds[i];
  }
  auto rng = restart_rng(cfg.seed, static_cast<std::uint64_t>(i));
  return random_pure_state(dim, rng);
}

OracleResult quartic_oracle(const ComplexMatrix& h, int dim, Sense sense, const OracleConfig& cfg,
                            std::span<const StateVector> seeds) {
  cfg.validate();
  const QuarticSearch search(h, dim);
  Visitor visit(cfg);
  const double sign = sense == Sense::Max ? 1.0 : -1.0;
  auto outcomes = run_restarts(cfg.restarts, cfg.threads, [&](int i) {
    return search.run(start_state(i, seeds, cfg, dim), sign, cfg, visit);
  });
  return merge(std::move(outcomes), sense, cfg);
}

}  // namespace

OracleConfig OracleConfig::tensor_defaults() {
  OracleConfig cfg;
  cfg.restarts = 2048;
  return cfg;
}

void OracleConfig::validate() const {
  if (restarts < 1) throw Error(ErrorKind::OutOfRange, "restarts must be >= 1");
  if (max_iters < 1) throw Error(ErrorKind::OutOfRange, "max_iters must be >= 1");
  if (!(step_tol > 0.0) || !(value_tol > 0.0)) {
    throw Error(ErrorKind::OutOfRange, "oracle tolerances must be positive");
  }
}

std::mt19937_64 restart_rng(std::uint64_t master, std::uint64_t index) {
  return std::mt19937_64(splitmix64(master ^ splitmix64(index + 1)));
}

StateVector random_pure_state(int dim, std::mt19937_64& rng) {
  if (dim < 1) throw Error(ErrorKind::OutOfRange, "dimension must be positive");
  std::normal_distribution<double> normal(0.0, 1.0);
  StateVector psi(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    psi(i) = cplx{re, im};
  }
  return psi / psi.norm();
}

std::vector<double> random_probabilities(int d, std::mt19937_64& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(d + 2);
  double total = 0.0;
  for (double& x : p) total += (x = expo(rng));
  for (double& x : p) x /= total;
  return p;
}

std::vector<StateVector> mub_seed_states(const MubFamily& fam, int n) {
  std::vector<StateVector> single;
  for (int alpha = 1; alpha <= fam.basis_count(); ++alpha) {
    for (int k = 0; k < fam.dimension(); ++k) single.push_back(fam.vector(alpha, k));
  }
  std::vector<StateVector> out = single;
  for (int copy = 1; copy < n; ++copy) {
    std::vector<StateVector> next;
    next.reserve(out.size() * single.size());
    for (const auto& a : out) {
      for (const auto& b : single) next.push_back(kron(a, b));
    }
    out = std::move(next);
  }
  return out;
}

std::vector<std::pair<StateVector, StateVector>> mub_seed_pairs(const MubFamily& fam) {
  std::vector<std::pair<StateVector, StateVector>> out;
  for (int alpha = 1; alpha <= fam.basis_count(); ++alpha) {
    for (int m = 0; m < fam.dimension(); ++m) out.emplace_back(fam.vector(alpha, 0), fam.vector(alpha, m));
  }
  return out;
}

OracleResult oracle_self_fidelity(const GenericChannel& ch, Sense sense, const OracleConfig& cfg,
                                  std::span<const StateVector> seeds) {
  check_oracle_size(ch);
  const ComplexMatrix h = top_hermitian_part(ch.superop);
  return quartic_oracle(h, ch.state_dim, sense, cfg, seeds);
}

OracleResult oracle_nu2(const GenericChannel& ch, const OracleConfig& cfg,
                        std::span<const StateVector> seeds) {
  check_oracle_size(ch);
  // Tr(Lambda[P]^2) = vec(P)^dagger S^dagger S vec(P) for Hermiticity-preserving maps.
  const ComplexMatrix h = ch.superop.adjoint() * ch.superop;
  OracleResult r = quartic_oracle(h, ch.state_dim, Sense::Max, cfg, seeds);
  r.value = std::sqrt(std::max(r.value, 0.0));
  for (auto& s : r.restarts) s.value = std::sqrt(std::max(s.value, 0.0));
  return r;
}

OracleResult oracle_nu_inf(const GenericChannel& ch, const OracleConfig& cfg,
                           std::span<const std::pair<StateVector, StateVector>> seeds) {
  check_oracle_size(ch);
  cfg.validate();
  const int dim = ch.state_dim;
  const ComplexMatrix adjoint = ch.superop.adjoint();
  Visitor visit(cfg);

  auto image = [dim](const ComplexMatrix& s, const StateVector& x) {
    return top_hermitian_part(unvec(s * vec(outer(x)), dim));
  };

  auto outcomes = run_restarts(cfg.restarts, cfg.threads, [&](int i) {
    StateVector p, q;
    if (i < static_cast<int>(seeds.size())) {
      p = seeds[i].first.normalized();
      q = seeds[i].second.normalized();
    } else {
      auto rng = restart_rng(cfg.seed, static_cast<std::uint64_t>(i));
      p = random_pure_state(dim, rng);
      q = p;
    }
    if (p.size() != dim || q.size() != dim) {
      throw Error(ErrorKind::DimensionMismatch, "seed state has wrong size");
    }
    double value = q.dot(image(ch.superop, p) * q).real();
    visit(p, &q);
    int it = 0;
    while (it < cfg.max_iters) {
      ++it;
      const double before = value;
      // Best output projector for the current input ...
      const Eigensystem out = hermitian_eigensystem(image(ch.superop, p));
      if (out.values(0) > value + kAcceptMargin) {
        q = out.vectors.col(0);
        value = out.values(0);
        visit(p, &q);
      }
      // ... then the best input for that projector: Tr(Q Lambda[P]) = Tr(Lambda^dagger[Q] P).
      const Eigensystem in = hermitian_eigensystem(image(adjoint, q));
      if (in.values(0) > value + kAcceptMargin) {
        p = in.vectors.col(0);
        value = in.values(0);
        visit(p, &q);
      }
      if (value - before < cfg.value_tol) break;
    }
    value = q.dot(image(ch.superop, p) * q).real();
    return Outcome{value, it, p, q};
  });
  return merge(std::move(outcomes), Sense::Max, cfg);
}

namespace {

GenericChannel as_generic(const GeneralizedPauliChannel& ch) {
  return {ch.dimension(), superoperator_of(ch)};
}

}  // namespace

OracleResult oracle_self_fidelity(const GeneralizedPauliChannel& ch, Sense sense, const OracleConfig& cfg) {
  const auto seeds = mub_seed_states(ch.family());
  return oracle_self_fidelity(as_generic(ch), sense, cfg, seeds);
}

OracleResult oracle_nu2(const GeneralizedPauliChannel& ch, const OracleConfig& cfg) {
  const auto seeds = mub_seed_states(ch.family());
  return oracle_nu2(as_generic(ch), cfg, seeds);
}

OracleResult oracle_nu_inf(const GeneralizedPauliChannel& ch, const OracleConfig& cfg) {
  const auto seeds = mub_seed_pairs(ch.family());
  return oracle_nu_inf(as_generic(ch), cfg, seeds);
}

ScanReport cptp_equivalence_scan(const MubFamily& fam, std::span<const Spectrum> spectra, double tol) {
  ScanReport rep;
  for (const Spectrum& sp : spectra) {
    ++rep.count;
    const FujiwaraAlgoetCheck fa = fujiwara_algoet_check(sp);
    const bool fa_ok = fa.passed(tol);
    const auto probs = probabilities_of(sp);
    const ComplexMatrix choi = choi_from_superoperator(superoperator_from_probabilities(fam, probs), sp.d);
    const RealVector w = hermitian_eigenvalues(top_hermitian_part(choi));
    const double min_eig = w(w.size() - 1);
    const bool choi_ok = min_eig >= -tol;
    rep.fujiwara_algoet_passes += fa_ok;
    rep.choi_passes += choi_ok;
    if (fa_ok != choi_ok) {
      ++rep.disagreements;
      rep.disagreeing.push_back(sp);
    }
    const double slack = std::min(std::abs(fa.lower_slack), std::abs(fa.upper_slack));
    if (slack <= 1e-9) {
      ++rep.boundary_count;
      rep.worst_boundary_eigenvalue = std::max(rep.worst_boundary_eigenvalue, std::abs(min_eig));
      rep.worst_boundary_slack = std::max(rep.worst_boundary_slack, slack);
    }
  }
  return rep;
}

ScanReport cptp_equivalence_scan(const MubFamily& fam, const ScanGrid& grid, double tol) {
  const int d = fam.dimension();
  std::mt19937_64 rng(splitmix64(grid.seed));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  std::uniform_int_distribution<int> pick(0, d + 1);
  std::uniform_real_distribution<double> depth(1e-6, 0.3);

  auto simplex_point = [&] {
    std::vector<double> p(d + 2);
    for (double& x : p) x = expo(rng);
    return p;
  };
  auto normalized_spectrum = [&](std::vector<double> p) {
    double total = 0.0;
    for (double x : p) total += x;
    for (double& x : p) x /= total;
    return spectrum_from_probabilities(d, p);
  };

  std::vector<Spectrum> spectra;
  spectra.reserve(grid.random_draws + grid.boundary_points + grid.violations);
  for (int i = 0; i < grid.random_draws; ++i) {
    Spectrum sp{d, std::vector<double>(d + 1)};
    for (double& l : sp.lambdas) l = unit(rng);
    spectra.push_back(std::move(sp));
  }
  // p_0 = 0 touches the lower bound, p_alpha = 0 the upper one.
  for (int i = 0; i < grid.boundary_points; ++i) {
    auto p = simplex_point();
    p[pick(rng)] = 0.0;
    spectra.push_back(normalized_spectrum(std::move(p)));
  }
  for (int i = 0; i < grid.violations; ++i) {
    auto p = simplex_point();
    double total = 0.0;
    for (double x : p) total += x;
    p[pick(rng)] = -depth(rng) * total;
    spectra.push_back(normalized_spectrum(std::move(p)));
  }
  return cptp_equivalence_scan(fam, spectra, tol);
}

double eigenrelation_residual(const MubFamily& fam, const ComplexMatrix& superop, const Spectrum& claimed) {
  const int d = fam.dimension();
  double worst = 0.0;
  for (int alpha = 1; alpha <= fam.basis_count(); ++alpha) {
    for (int k = 1; k < d; ++k) {
      const StateVector u = vec(unbiased_unitary(fam, alpha, k));
      worst = std::max(worst, (superop * u - claimed.lambdas[alpha - 1] * u).norm());
    }
  }
  return worst;
}

double eigenrelation_check(const GeneralizedPauliChannel& ch) {
  const Spectrum sp = spectrum_of(ch);
  const int d = ch.dimension();
  double worst = 0.0;
  for (int alpha = 1; alpha <= d + 1; ++alpha) {
    for (int k = 1; k < d; ++k) {
      const ComplexMatrix u = unbiased_unitary(ch.family(), alpha, k);
      worst = std::max(worst, (apply_channel(ch, u) - sp.lambdas[alpha - 1] * u).norm());
    }
  }
  return worst;
}

ProbeReport tensor_multiplicativity_probe(const GeneralizedPauliChannel& ch, int n, const OracleConfig& cfg) {
  const GenericChannel power = tensor_power(ch, n);
  const auto seeds = mub_seed_states(ch.family(), n);
  ProbeReport rep;
  rep.n = n;
  rep.search = oracle_self_fidelity(power, Sense::Max, cfg, seeds);
  rep.estimate = rep.search.value;
  rep.baseline = std::pow(f_extremes(ch).f_max, n);
  rep.excess = rep.estimate - rep.baseline;
  rep.corollary_regime = multiplicativity_class(ch).fmax_multiplicative;
  return rep;
}

}  // namespace gpcfid
