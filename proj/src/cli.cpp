#include "gpcfid/cli.hpp"

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "gpcfid/channel.hpp"
#include "gpcfid/dynamics.hpp"
#include "gpcfid/io.hpp"
#include "gpcfid/metrics.hpp"
#include "gpcfid/mub.hpp"
#include "gpcfid/oracle.hpp"

#ifndef GPCFID_VERSION
#define GPCFID_VERSION "0.0.0"
#endif

namespace gpcfid::cli {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::UnsupportedDimension:
    case ErrorKind::OutOfRange:
    case ErrorKind::IndexOutOfRange:
      return kExitParse;
    case ErrorKind::TooLarge:
      return kExitResource;
    case ErrorKind::NotCptp:
    case ErrorKind::BadProbabilities:
    case ErrorKind::InvalidTrajectory:
    case ErrorKind::InvalidFamily:
    case ErrorKind::InvalidState:
    case ErrorKind::DimensionMismatch:
    case ErrorKind::FamilyMismatch:
    case ErrorKind::NotHermitian:
      return kExitInvalid;
  }
  return kExitInvalid;
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::Parse, "SHA-256 failed for " + path.string());
  }
  std::ostringstream hex;
  hex << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) hex << std::setw(2) << static_cast<int>(digest[i]);
  return hex.str();
}

namespace {

const std::uint64_t kDefaultSeed = OracleConfig{}.seed;
constexpr double kAgreementTol = 1e-6;

using Clock = std::chrono::steady_clock;

struct Manifest {
  std::string command;
  std::uint64_t seed = kDefaultSeed;
  json config = json::object();
  json inputs = json::array();
  bool timing = false;
  Clock::time_point start = Clock::now();

  void add_input(const fs::path& path) {
    inputs.push_back({{"path", path.generic_string()}, {"sha256", sha256_file(path)}});
  }

  json to_json() const {
    json j = {{"command", command},
              {"tool_version", GPCFID_VERSION},
              {"seed", seed},
              {"config", config},
              {"inputs", inputs}};
    if (timing) {
      j["duration_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
    }
    return j;
  }
};

void write_text(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Parse, "cannot write " + path);
  f << text;
}

void emit(const json& report, const std::string& path, std::ostream& out) {
  write_text(report.dump(2) + "\n", path, out);
}

json channel_section(int d, std::span<const double> probs, const Spectrum& sp, bool cptp) {
  return {{"d", d},
          {"probabilities", std::vector<double>(probs.begin(), probs.end())},
          {"eigenvalues", sp.lambdas},
          {"cptp", cptp},
          {"slacks", gpcfid::to_json(fujiwara_algoet_check(sp))}};
}

json metrics_section(const GeneralizedPauliChannel& ch, const RegularizedFmax& reg) {
  const FidelityReport r = fidelity_report(ch);
  return {{"f_min", r.f_min},
          {"f_max", r.f_max},
          {"nu2", r.nu2},
          {"nu_inf", r.nu_inf},
          {"nu_inf_exact", r.nu_inf_exact},
          {"flags", gpcfid::to_json(r.flags)},
          {"attainment", gpcfid::to_json(r.attainment)},
          {"regularized", gpcfid::to_json(reg)}};
}

json check_against(const OracleResult& res, double closed, const MubFamily& fam) {
  const double residual = std::abs(res.value - closed);
  return {{"closed_form", closed},
          {"residual", residual},
          {"agrees", residual <= kAgreementTol},
          {"search", gpcfid::to_json(res, &fam)}};
}

struct LoadedChannel {
  ChannelSpec spec;
  std::shared_ptr<const MubFamily> fam;
};

LoadedChannel load_channel(const std::string& path, Manifest& manifest) {
  const fs::path p(path);
  manifest.add_input(p);
  LoadedChannel lc;
  lc.spec = parse_channel_spec(read_json_file(p), p.parent_path());
  if (lc.spec.mub_file) manifest.add_input(*lc.spec.mub_file);
  lc.fam = resolve_family(lc.spec.d, lc.spec.mub_file);
  return lc;
}

OracleConfig oracle_config(int restarts, std::uint64_t seed, int threads) {
  OracleConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  cfg.threads = threads;
  cfg.validate();
  return cfg;
}

json oracle_config_echo(const OracleConfig& cfg) {
  return {{"restarts", cfg.restarts},
          {"max_iters", cfg.max_iters},
          {"step_tol", cfg.step_tol},
          {"value_tol", cfg.value_tol}};
}

// ---- mub ----------------------------------------------------------------

struct MubOpts {
  int d = 2;
  std::string out;
  bool timing = false;
};

int cmd_mub(const MubOpts& o, std::ostream& out) {
  Manifest m;
  m.command = "mub";
  m.timing = o.timing;
  m.config = {{"d", o.d}};
  const MubFamily fam = build_mub_family(o.d);
  const MubValidation v = validate_mub_family(fam);
  json j = mub_to_json(fam);
  j["validation"] = {{"orthonormality_residual", v.orthonormality_residual},
                     {"unbiasedness_residual", v.unbiasedness_residual},
                     {"tol", v.tol}};
  j["manifest"] = m.to_json();
  emit(j, o.out, out);
  return kExitOk;
}

// ---- validate -----------------------------------------------------------

struct ValidateOpts {
  std::string spec;
  std::string out;
  bool timing = false;
};

int cmd_validate(const ValidateOpts& o, std::ostream& out) {
  Manifest m;
  m.command = "validate";
  m.timing = o.timing;
  const fs::path p(o.spec);
  m.add_input(p);
  const json doc = read_json_file(p);
  json report;

  if (doc.contains("bases")) {
    const int d = doc.contains("d") && doc["d"].is_number_integer() ? doc["d"].get<int>() : 0;
    bool ok = true;
    std::string message;
    try {
      (void)mub_from_json(doc);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::InvalidFamily) throw;
      ok = false;
      message = e.what();
    }
    report = {{"kind", "mub"}, {"d", d}, {"valid", ok}};
    if (!ok) report["message"] = message;
    report["manifest"] = m.to_json();
    emit(report, o.out, out);
    return ok ? kExitOk : kExitInvalid;
  }

  if (doc.contains("rates") || doc.contains("trajectory")) {
    const EvolutionSpec evo = parse_evolution_spec(doc, p.parent_path());
    report = {{"kind", "evolution"},
              {"d", evo.dimension()},
              {"type", evo.kind() == EvolutionSpec::Kind::ExponentialRates ? "rates" : "trajectory"}};
    bool ok = true;
    if (evo.kind() == EvolutionSpec::Kind::SampledTrajectory) {
      std::vector<double> nodes;
      for (const auto& s : evo.samples()) nodes.push_back(s.t);
      const ValidationTimeline tl = validate_trajectory(evo, nodes);
      ok = tl.valid();
      if (!ok) report["first_violation"] = *tl.first_violation;
    }
    report["valid"] = ok;
    report["manifest"] = m.to_json();
    emit(report, o.out, out);
    return ok ? kExitOk : kExitInvalid;
  }

  const ChannelSpec spec = parse_channel_spec(doc, p.parent_path());
  if (spec.mub_file) m.add_input(*spec.mub_file);
  const auto fam = resolve_family(spec.d, spec.mub_file);
  const Spectrum sp = spec_spectrum(spec);
  const std::vector<double> probs = spec.probabilities ? *spec.probabilities : probabilities_of(sp);
  bool ok = true;
  std::string message;
  try {
    (void)build_channel(spec, fam);
  } catch (const Error& e) {
    if (exit_code_for(e.kind()) != kExitInvalid) throw;
    ok = false;
    message = e.what();
  }
  const ComplexMatrix choi = choi_from_superoperator(superoperator_from_probabilities(*fam, probs), spec.d);
  report = {{"kind", "channel"},
            {"channel", channel_section(spec.d, probs, sp, ok)},
            {"choi_min_eigenvalue", hermitian_eigenvalues(0.5 * (choi + choi.adjoint())).minCoeff()},
            {"valid", ok}};
  if (!ok) report["message"] = message;
  report["manifest"] = m.to_json();
  emit(report, o.out, out);
  return ok ? kExitOk : kExitInvalid;
}

// ---- analyze ------------------------------------------------------------

struct AnalyzeOpts {
  std::string spec;
  bool oracle = false;
  int restarts = OracleConfig{}.restarts;
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;
  int regularize = 1;
  bool allow_noncptp = false;
  std::string out;
  bool timing = false;
};

int cmd_analyze(const AnalyzeOpts& o, std::ostream& out, std::ostream& err) {
  Manifest m;
  m.command = "analyze";
  m.timing = o.timing;
  m.seed = o.seed;
  const OracleConfig cfg = oracle_config(o.restarts, o.seed, o.threads);
  m.config = {{"oracle", o.oracle}, {"regularize", o.regularize}, {"allow_noncptp", o.allow_noncptp}};
  if (o.oracle) m.config["search"] = oracle_config_echo(cfg);
  if (o.regularize < 1) throw Error(ErrorKind::OutOfRange, "--regularize must be at least 1");

  const LoadedChannel lc = load_channel(o.spec, m);
  const int d = lc.spec.d;

  std::optional<GeneralizedPauliChannel> ch;
  try {
    ch.emplace(build_channel(lc.spec, lc.fam));
  } catch (const Error& e) {
    const bool invalid_channel = e.kind() == ErrorKind::NotCptp || e.kind() == ErrorKind::BadProbabilities;
    if (!o.allow_noncptp || !invalid_channel) throw;
    const Spectrum sp = spec_spectrum(lc.spec);
    const std::vector<double> probs = lc.spec.probabilities ? *lc.spec.probabilities : probabilities_of(sp);
    const ComplexMatrix choi = choi_from_superoperator(superoperator_from_probabilities(*lc.fam, probs), d);
    json report = {{"channel", channel_section(d, probs, sp, false)},
                   {"diagnostics",
                    {{"message", e.what()},
                     {"choi_min_eigenvalue", hermitian_eigenvalues(0.5 * (choi + choi.adjoint())).minCoeff()}}}};
    report["manifest"] = m.to_json();
    err << "warning: " << e.what() << "\n";
    emit(report, o.out, out);
    return kExitOk;
  }

  const Spectrum sp = spectrum_of(*ch);
  const auto mode = o.oracle && o.regularize > 1 ? RegularizationMode::Oracle : RegularizationMode::Closed;
  OracleConfig reg_cfg = OracleConfig::tensor_defaults();
  reg_cfg.seed = o.seed;
  reg_cfg.threads = o.threads;
  const RegularizedFmax reg = regularized_fmax(*ch, o.regularize, mode, &reg_cfg);

  json report = {{"channel", channel_section(d, ch->probabilities(), sp, true)},
                 {"metrics", metrics_section(*ch, reg)}};

  if (o.oracle) {
    const FidelityReport closed = fidelity_report(*ch);
    const MubFamily& fam = ch->family();
    json section = {
        {"f_max", check_against(oracle_self_fidelity(*ch, Sense::Max, cfg), closed.f_max, fam)},
        {"f_min", check_against(oracle_self_fidelity(*ch, Sense::Min, cfg), closed.f_min, fam)},
        {"nu2", check_against(oracle_nu2(*ch, cfg), closed.nu2, fam)},
        {"nu_inf", check_against(oracle_nu_inf(*ch, cfg), closed.nu_inf, fam)},
        {"eigenrelation_residual", eigenrelation_check(*ch)},
        {"identity_residual", nu2_fmax_identity(*ch)},
        {"agreement_tol", kAgreementTol}};
    double worst = 0.0;
    for (const char* key : {"f_max", "f_min", "nu2", "nu_inf"}) {
      worst = std::max(worst, section[key]["residual"].get<double>());
    }
    section["max_residual"] = worst;
    section["agrees"] = worst <= kAgreementTol;
    report["oracle"] = std::move(section);
  }
  report["manifest"] = m.to_json();
  emit(report, o.out, out);
  return kExitOk;
}

// ---- tensor -------------------------------------------------------------

struct TensorOpts {
  std::string spec;
  int n = 2;
  int restarts = OracleConfig::tensor_defaults().restarts;
  std::uint64_t seed = kDefaultSeed;
  int threads = 0;
  std::string out;
  bool timing = false;
};

int cmd_tensor(const TensorOpts& o, std::ostream& out) {
  Manifest m;
  m.command = "tensor";
  m.timing = o.timing;
  m.seed = o.seed;
  OracleConfig cfg = OracleConfig::tensor_defaults();
  cfg.restarts = o.restarts;
  cfg.seed = o.seed;
  cfg.threads = o.threads;
  cfg.validate();
  m.config = {{"n", o.n}, {"search", oracle_config_echo(cfg)}};

  const LoadedChannel lc = load_channel(o.spec, m);
  const GeneralizedPauliChannel ch = build_channel(lc.spec, lc.fam);
  const ProbeReport probe = tensor_multiplicativity_probe(ch, o.n, cfg);
  const MultiplicativityFlags flags = multiplicativity_class(ch);

  json p = {{"n", probe.n},
            {"estimate", probe.estimate},
            {"baseline", probe.baseline},
            {"excess", probe.excess},
            {"verdict", probe.corollary_regime ? "corollary regime" : "open regime"},
            {"search", gpcfid::to_json(probe.search)}};
  if (probe.corollary_regime) {
    p["tolerance"] = kAgreementTol;
    p["within_tolerance"] = probe.excess <= kAgreementTol && probe.estimate >= probe.baseline - kAgreementTol;
  }
  json report = {{"channel", channel_section(lc.spec.d, ch.probabilities(), spectrum_of(ch), true)},
                 {"metrics",
                  {{"f_max", f_extremes(ch).f_max},
                   {"nu_inf", nu_inf(ch)},
                   {"flags", gpcfid::to_json(flags)}}},
                 {"probe", std::move(p)}};
  report["manifest"] = m.to_json();
  emit(report, o.out, out);
  return kExitOk;
}

// ---- evolve -------------------------------------------------------------

struct EvolveOpts {
  std::string spec;
  double t_max = 0.0;
  int steps = 0;
  std::string csv;
  std::string out;
  bool timing = false;
};

int cmd_evolve(const EvolveOpts& o, std::ostream& out, std::ostream& err) {
  Manifest m;
  m.command = "evolve";
  m.timing = o.timing;
  m.config = {{"t_max", o.t_max}, {"steps", o.steps}};
  const fs::path p(o.spec);
  m.add_input(p);
  const EvolutionSpec evo = parse_evolution_spec(read_json_file(p), p.parent_path());
  const std::vector<double> grid = uniform_grid(o.t_max, o.steps);
  const std::vector<TimelineRow> rows = timeline_report(evo, grid);

  bool equal = true;
  bool nonincreasing = true;
  bool fmax_mult = true;
  bool nuinf_mult = true;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const FidelityReport& r = rows[i].report;
    equal = equal && std::abs(r.f_max - r.nu_inf) <= 1e-12;
    if (i > 0) nonincreasing = nonincreasing && r.f_max <= rows[i - 1].report.f_max + 1e-15;
    fmax_mult = fmax_mult && r.flags.fmax_multiplicative;
    nuinf_mult = nuinf_mult && r.flags.nuinf_multiplicative;
  }
  json summary = {{"d", evo.dimension()},
                  {"type", evo.kind() == EvolutionSpec::Kind::ExponentialRates ? "rates" : "trajectory"},
                  {"rows", rows.size()},
                  {"valid", true},
                  {"contract",
                   {{"f_max_equals_nu_inf", equal},
                    {"f_max_nonincreasing", nonincreasing},
                    {"fmax_multiplicative_throughout", fmax_mult},
                    {"nuinf_multiplicative_throughout", nuinf_mult}}},
                  {"final",
                   {{"t", rows.back().t},
                    {"f_min", rows.back().report.f_min},
                    {"f_max", rows.back().report.f_max},
                    {"nu_inf", rows.back().report.nu_inf}}}};
  summary["manifest"] = m.to_json();

  write_text(timeline_csv(rows), o.csv, out);
  if (!o.out.empty()) {
    emit(summary, o.out, out);
  } else if (!o.csv.empty()) {
    emit(summary, "", out);
  } else {
    emit(summary, "", err);
  }
  return kExitOk;
}

// ---- selftest -----------------------------------------------------------

struct SelftestOpts {
  std::vector<int> dims{2, 3};
  std::uint64_t seed = kDefaultSeed;
  int restarts = 32;
  int channels = 5;
  bool corrupt_mub = false;
};

// Rotates the first two vectors of basis 2 by a small angle: the basis stays
// orthonormal but is no longer unbiased with the others.
MubFamily corrupted(const MubFamily& fam) {
  std::vector<ComplexMatrix> bases;
  for (int a = 1; a <= fam.basis_count(); ++a) bases.push_back(fam.basis(a));
  const double c = std::cos(1e-3), s = std::sin(1e-3);
  const StateVector v0 = bases[1].col(0), v1 = bases[1].col(1);
  bases[1].col(0) = c * v0 + s * v1;
  bases[1].col(1) = -s * v0 + c * v1;
  return MubFamily(fam.dimension(), std::move(bases));
}

int cmd_selftest(const SelftestOpts& o, std::ostream& out) {
  int passed = 0;
  int total = 0;
  auto report = [&](int d, const std::string& name, bool ok, const std::string& detail) {
    ++total;
    if (ok) ++passed;
    out << (ok ? "PASS " : "FAIL ") << "d=" << d << " " << name << ": " << detail << "\n";
  };
  auto fmt = [](double x) {
    std::ostringstream s;
    s << std::setprecision(3) << std::scientific << x;
    return s.str();
  };

  for (int d : o.dims) {
    auto fam = std::make_shared<const MubFamily>(o.corrupt_mub ? corrupted(build_mub_family(d)) : build_mub_family(d));

    const MubValidation v = validate_mub_family(*fam, 1e-12);
    report(d, "mub", v.passed(),
           "orthonormality residual " + fmt(v.orthonormality_residual) + ", unbiasedness residual " +
               fmt(v.unbiasedness_residual));

    double trace_res = 0.0;
    for (int a = 1; a <= d + 1; ++a) {
      for (int k = 1; k < d; ++k) {
        const ComplexMatrix u = unbiased_unitary(*fam, a, k);
        for (int b = 1; b <= d + 1; ++b) {
          for (int l = 1; l < d; ++l) {
            const cplx t = (u.adjoint() * unbiased_unitary(*fam, b, l)).trace();
            const double expect = (a == b && k == l) ? d : 0.0;
            trace_res = std::max(trace_res, std::abs(t - expect));
          }
        }
      }
    }
    report(d, "trace orthogonality", trace_res <= 1e-10, "residual " + fmt(trace_res));

    ScanGrid grid;
    grid.random_draws = 1000;
    grid.boundary_points = 50;
    grid.violations = 50;
    grid.seed = o.seed + d;
    const ScanReport scan = cptp_equivalence_scan(*fam, grid);
    report(d, "cptp equivalence", scan.disagreements == 0,
           std::to_string(scan.disagreements) + " disagreements in " + std::to_string(scan.count));

    std::mt19937_64 rng = restart_rng(o.seed, static_cast<std::uint64_t>(d));
    OracleConfig cfg;
    cfg.restarts = o.restarts;
    cfg.seed = o.seed;
    double eig_res = 0.0, id_res = 0.0, oracle_res = 0.0;
    for (int i = 0; i < 10; ++i) {
      const auto ch = channel_from_probabilities(d, random_probabilities(d, rng), fam);
      eig_res = std::max(eig_res, eigenrelation_residual(*fam, superoperator_of(ch), spectrum_of(ch)));
      id_res = std::max(id_res, nu2_fmax_identity(ch));
      if (i < o.channels) {
        const FidelityReport r = fidelity_report(ch);
        oracle_res = std::max({oracle_res,
                               std::abs(oracle_self_fidelity(ch, Sense::Max, cfg).value - r.f_max),
                               std::abs(oracle_self_fidelity(ch, Sense::Min, cfg).value - r.f_min),
                               std::abs(oracle_nu2(ch, cfg).value - r.nu2),
                               std::abs(oracle_nu_inf(ch, cfg).value - r.nu_inf)});
      }
    }
    report(d, "eigenrelation", eig_res <= 1e-12, "residual " + fmt(eig_res));
    report(d, "f_max(L o L) = nu2^2", id_res <= 1e-12, "residual " + fmt(id_res));
    report(d, "closed forms vs oracle", oracle_res <= kAgreementTol, "max residual " + fmt(oracle_res));
  }
  out << "selftest: " << passed << "/" << total << " checks passed\n";
  return passed == total ? kExitOk : kExitSelftestFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized Pauli channel fidelities, output norms and brute-force checks", "gpcfid"};
  app.require_subcommand(1);
  app.set_version_flag("--version", GPCFID_VERSION);

  MubOpts mub;
  auto* mub_cmd = app.add_subcommand("mub", "Write the built-in MUB family for a prime d as JSON");
  mub_cmd->add_option("--d", mub.d, "Dimension (prime, <= 31)")->required();
  mub_cmd->add_option("--out", mub.out, "Output file (default: stdout)");
  mub_cmd->add_flag("--timing", mub.timing, "Record wall-clock duration in the manifest");

  ValidateOpts val;
  auto* val_cmd = app.add_subcommand("validate", "Check a channel, evolution or MUB file");
  val_cmd->add_option("spec", val.spec, "Input JSON")->required();
  val_cmd->add_option("--out", val.out, "Output file (default: stdout)");
  val_cmd->add_flag("--timing", val.timing, "Record wall-clock duration in the manifest");

  AnalyzeOpts an;
  auto* an_cmd = app.add_subcommand("analyze", "Closed-form fidelity and norm report, optionally oracle-checked");
  an_cmd->add_option("spec", an.spec, "Channel spec JSON")->required();
  an_cmd->add_flag("--oracle", an.oracle, "Verify every closed form by brute-force search");
  an_cmd->add_option("--restarts", an.restarts, "Oracle restarts")->check(CLI::PositiveNumber);
  an_cmd->add_option("--seed", an.seed, "Master seed");
  an_cmd->add_option("--threads", an.threads, "Worker threads (0 = all cores; does not change results)")
      ->check(CLI::NonNegativeNumber);
  an_cmd->add_option("--regularize", an.regularize, "Regularization order n for f_max (oracle mode if > 1)");
  an_cmd->add_flag("--allow-noncptp", an.allow_noncptp, "Emit diagnostics instead of failing on a non-CPTP spec");
  an_cmd->add_option("--out", an.out, "Output file (default: stdout)");
  an_cmd->add_flag("--timing", an.timing, "Record wall-clock duration in the manifest");

  TensorOpts tn;
  auto* tn_cmd = app.add_subcommand("tensor", "Search f_max of the n-fold tensor power");
  tn_cmd->add_option("spec", tn.spec, "Channel spec JSON")->required();
  tn_cmd->add_option("--n", tn.n, "Tensor power")->required();
  tn_cmd->add_option("--restarts", tn.restarts, "Search restarts")->check(CLI::PositiveNumber);
  tn_cmd->add_option("--seed", tn.seed, "Master seed");
  tn_cmd->add_option("--threads", tn.threads, "Worker threads")->check(CLI::NonNegativeNumber);
  tn_cmd->add_option("--out", tn.out, "Output file (default: stdout)");
  tn_cmd->add_flag("--timing", tn.timing, "Record wall-clock duration in the manifest");

  EvolveOpts ev;
  auto* ev_cmd = app.add_subcommand("evolve", "Timeline of a dynamical map");
  ev_cmd->add_option("spec", ev.spec, "Evolution spec JSON")->required();
  ev_cmd->add_option("--t-max", ev.t_max, "Final time")->required();
  ev_cmd->add_option("--steps", ev.steps, "Number of grid times, 0 and t_max included")->required();
  ev_cmd->add_option("--csv", ev.csv, "CSV file (default: stdout)");
  ev_cmd->add_option("--out", ev.out, "Summary JSON file");
  ev_cmd->add_flag("--timing", ev.timing, "Record wall-clock duration in the manifest");

  SelftestOpts st;
  auto* st_cmd = app.add_subcommand("selftest", "Reduced-scale verification run");
  st_cmd->add_option("--d", st.dims, "Dimensions")->delimiter(',');
  st_cmd->add_option("--seed", st.seed, "Master seed");
  st_cmd->add_option("--restarts", st.restarts, "Oracle restarts per check")->check(CLI::PositiveNumber);
  st_cmd->add_flag("--corrupt-mub", st.corrupt_mub, "Test hook: perturb the built-in family")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (*mub_cmd) return cmd_mub(mub, out);
    if (*val_cmd) return cmd_validate(val, out);
    if (*an_cmd) return cmd_analyze(an, out, err);
    if (*tn_cmd) return cmd_tensor(tn, out);
    if (*ev_cmd) return cmd_evolve(ev, out, err);
    if (*st_cmd) return cmd_selftest(st, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitSelftestFailed;
  }
  return kExitParse;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace gpcfid::cli
