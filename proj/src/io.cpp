#include "gpcfid/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "gpcfid/errors.hpp"

namespace gpcfid {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorKind::Parse, what); }

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing key \"") + key + "\"");
  return j.at(key);
}

int read_dimension(const json& j) {
  const json& d = require(j, "d");
  if (!d.is_number_integer()) parse_fail("\"d\" must be an integer");
  const int v = d.get<int>();
  if (v < 2) parse_fail("\"d\" must be at least 2");
  return v;
}

std::vector<double> read_reals(const json& j, const char* key) {
  const json& arr = require(j, key);
  if (!arr.is_array()) parse_fail(std::string("\"") + key + "\" must be an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& x : arr) {
    if (!x.is_number()) parse_fail(std::string("\"") + key + "\" must hold numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::optional<fs::path> read_mub_path(const json& j, const fs::path& base_dir) {
  if (!j.contains("mub_file")) return std::nullopt;
  const json& v = j.at("mub_file");
  if (!v.is_string()) parse_fail("\"mub_file\" must be a string");
  fs::path p = v.get<std::string>();
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return p;
}

}  // namespace

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    parse_fail(path.string() + ": " + e.what());
  }
}

json mub_to_json(const MubFamily& fam) {
  json bases = json::array();
  for (int alpha = 1; alpha <= fam.basis_count(); ++alpha) {
    json vectors = json::array();
    for (int k = 0; k < fam.dimension(); ++k) {
      json entries = json::array();
      for (int l = 0; l < fam.dimension(); ++l) {
        const cplx z = fam.basis(alpha)(l, k);
        entries.push_back({z.real(), z.imag()});
      }
      vectors.push_back(std::move(entries));
    }
    bases.push_back(std::move(vectors));
  }
  return {{"d", fam.dimension()}, {"bases", std::move(bases)}};
}

MubFamily mub_from_json(const json& j) {
  const int d = read_dimension(j);
  const json& bases = require(j, "bases");
  if (!bases.is_array() || bases.size() != static_cast<std::size_t>(d + 1)) {
    parse_fail("\"bases\" must list d + 1 = " + std::to_string(d + 1) + " bases");
  }
  std::vector<ComplexMatrix> mats;
  for (const auto& b : bases) {
    if (!b.is_array() || b.size() != static_cast<std::size_t>(d)) parse_fail("each basis needs d vectors");
    ComplexMatrix m(d, d);
    for (int k = 0; k < d; ++k) {
      const json& v = b[k];
      if (!v.is_array() || v.size() != static_cast<std::size_t>(d)) parse_fail("each vector needs d entries");
      for (int l = 0; l < d; ++l) {
        const json& z = v[l];
        if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number()) {
          parse_fail("entries are [re, im] pairs");
        }
        m(l, k) = cplx{z[0].get<double>(), z[1].get<double>()};
      }
    }
    mats.push_back(std::move(m));
  }
  MubFamily fam(d, std::move(mats));
  const MubValidation rep = validate_mub_family(fam, kMubFileTol);
  if (!rep.passed()) {
    std::ostringstream msg;
    msg << "MUB file fails validation: orthonormality residual " << rep.orthonormality_residual
        << ", unbiasedness residual " << rep.unbiasedness_residual;
    throw Error(ErrorKind::InvalidFamily, msg.str());
  }
  return fam;
}

MubFamily load_mub_file(const fs::path& path) { return mub_from_json(read_json_file(path)); }

ChannelSpec parse_channel_spec(const json& j, const fs::path& base_dir) {
  ChannelSpec spec;
  spec.d = read_dimension(j);
  const bool has_p = j.contains("probabilities");
  const bool has_l = j.contains("eigenvalues");
  if (has_p == has_l) parse_fail("give exactly one of \"probabilities\" and \"eigenvalues\"");
  if (has_p) {
    spec.probabilities = read_reals(j, "probabilities");
    if (spec.probabilities->size() != static_cast<std::size_t>(spec.d + 2)) {
      parse_fail("\"probabilities\" needs d + 2 entries");
    }
  } else {
    spec.eigenvalues = read_reals(j, "eigenvalues");
    if (spec.eigenvalues->size() != static_cast<std::size_t>(spec.d + 1)) {
      parse_fail("\"eigenvalues\" needs d + 1 entries");
    }
  }
  spec.mub_file = read_mub_path(j, base_dir);
  return spec;
}

std::shared_ptr<const MubFamily> resolve_family(int d, const std::optional<fs::path>& mub_file) {
  if (mub_file) {
    auto fam = std::make_shared<const MubFamily>(load_mub_file(*mub_file));
    if (fam->dimension() != d) {
      throw Error(ErrorKind::DimensionMismatch, "MUB file has d = " + std::to_string(fam->dimension()));
    }
    return fam;
  }
  return std::make_shared<const MubFamily>(build_mub_family(d));
}

Spectrum spec_spectrum(const ChannelSpec& spec) {
  if (spec.eigenvalues) return Spectrum{spec.d, *spec.eigenvalues};
  return spectrum_from_probabilities(spec.d, *spec.probabilities);
}

GeneralizedPauliChannel build_channel(const ChannelSpec& spec, std::shared_ptr<const MubFamily> fam) {
  if (spec.eigenvalues) return channel_from_eigenvalues(spec.d, *spec.eigenvalues, std::move(fam));
  std::vector<double> p = *spec.probabilities;
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  if (std::abs(total - 1.0) > kProbabilityDrift) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "probabilities sum to " << total << ", beyond the accepted drift of " << kProbabilityDrift;
    throw Error(ErrorKind::BadProbabilities, msg.str());
  }
  for (double& x : p) x /= total;
  return channel_from_probabilities(spec.d, std::move(p), std::move(fam));
}

EvolutionSpec parse_evolution_spec(const json& j, const fs::path& base_dir) {
  const int d = read_dimension(j);
  const bool has_rates = j.contains("rates");
  const bool has_traj = j.contains("trajectory");
  if (has_rates == has_traj) parse_fail("give exactly one of \"rates\" and \"trajectory\"");
  auto fam = resolve_family(d, read_mub_path(j, base_dir));
  if (has_rates) {
    auto rates = read_reals(j, "rates");
    if (rates.size() != static_cast<std::size_t>(d + 1)) parse_fail("\"rates\" needs d + 1 entries");
    return EvolutionSpec::exponential(std::move(fam), std::move(rates));
  }
  const json& traj = j.at("trajectory");
  if (!traj.is_array()) parse_fail("\"trajectory\" must be an array");
  std::vector<TrajectorySample> samples;
  for (const auto& s : traj) {
    const json& t = require(s, "t");
    if (!t.is_number()) parse_fail("sample \"t\" must be a number");
    auto lambdas = read_reals(s, "lambdas");
    if (lambdas.size() != static_cast<std::size_t>(d + 1)) parse_fail("\"lambdas\" needs d + 1 entries");
    samples.push_back({t.get<double>(), std::move(lambdas)});
  }
  return EvolutionSpec::sampled(std::move(fam), std::move(samples));
}

json to_json(const Spectrum& sp) { return sp.lambdas; }

json to_json(const FujiwaraAlgoetCheck& fa) {
  return {{"sum", fa.sum}, {"lower", fa.lower_slack}, {"upper", fa.upper_slack}};
}

json to_json(const MultiplicativityFlags& f) {
  return {{"fmax_multiplicative", f.fmax_multiplicative},
          {"fmin_multiplicative", f.fmin_multiplicative},
          {"nuinf_equals_fmax", f.nuinf_equals_fmax},
          {"nuinf_multiplicative", f.nuinf_multiplicative}};
}

json to_json(const Attainment& a) {
  return {{"argmax_alpha", a.argmax_alpha},
          {"argmin_alpha", a.argmin_alpha},
          {"nu2_alpha", a.nu2_alpha},
          {"nu2_with_fmax", a.nu2_with_fmax},
          {"nu2_with_fmin", a.nu2_with_fmin},
          {"nu_inf_alpha", a.nu_inf_alpha},
          {"nu_inf_branch", a.nu_inf_positive_branch ? "fidelity" : "antipodal"}};
}

json to_json(const FidelityReport& r) {
  return {{"f_min", r.f_min},
          {"f_max", r.f_max},
          {"nu2", r.nu2},
          {"nu_inf", r.nu_inf},
          {"nu_inf_exact", r.nu_inf_exact},
          {"flags", to_json(r.flags)},
          {"attainment", to_json(r.attainment)},
          {"regularized_fmax_exact", r.regularized_exact}};
}

json to_json(const RegularizedFmax& r) {
  json j = {{"n", r.n}, {"exact", r.exact}, {"lower", r.lower}, {"upper_nu_inf", r.upper}};
  if (r.exact) j["value"] = r.value;
  if (!r.oracle_root.empty()) j["oracle_nth_root"] = r.oracle_root;
  return j;
}

json to_json(const ScanReport& r) {
  return {{"count", r.count},
          {"disagreements", r.disagreements},
          {"fujiwara_algoet_passes", r.fujiwara_algoet_passes},
          {"choi_passes", r.choi_passes},
          {"boundary_count", r.boundary_count},
          {"worst_boundary_eigenvalue", r.worst_boundary_eigenvalue},
          {"worst_boundary_slack", r.worst_boundary_slack}};
}

std::optional<std::pair<int, int>> match_mub_vector(const MubFamily& fam, const StateVector& psi, double tol) {
  if (psi.size() != fam.dimension()) return std::nullopt;
  const StateVector unit = psi.normalized();
  for (int alpha = 1; alpha <= fam.basis_count(); ++alpha) {
    for (int k = 0; k < fam.dimension(); ++k) {
      if (std::norm(fam.vector(alpha, k).dot(unit)) >= 1.0 - tol) return std::make_pair(alpha, k);
    }
  }
  return std::nullopt;
}

json to_json(const OracleResult& r, const MubFamily* fam) {
  int total_iters = 0;
  int worst_iters = 0;
  for (const auto& s : r.restarts) {
    total_iters += s.iterations;
    worst_iters = std::max(worst_iters, s.iterations);
  }
  json j = {{"value", r.value},
            {"best_restart", r.best_restart},
            {"restarts", r.restart_count},
            {"seed", r.seed},
            {"mean_iterations", r.restarts.empty() ? 0.0 : double(total_iters) / r.restarts.size()},
            {"max_iterations", worst_iters}};
  if (fam) {
    auto locate = [&](const StateVector& s) -> json {
      if (const auto hit = match_mub_vector(*fam, s)) return {{"alpha", hit->first}, {"k", hit->second}};
      return nullptr;
    };
    j["state_mub"] = locate(r.state);
    if (r.dual_state.size() > 0) j["dual_state_mub"] = locate(r.dual_state);
  }
  return j;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string timeline_csv(const std::vector<TimelineRow>& rows) {
  std::ostringstream out;
  const int d = rows.empty() ? 0 : rows.front().report.spectrum.d;
  out << "t";
  for (int a = 1; a <= d + 1; ++a) out << ",lambda_" << a;
  out << ",f_min,f_max,nu2,nu_inf,flags\n";
  for (const auto& row : rows) {
    const FidelityReport& r = row.report;
    out << format_double(row.t);
    for (double l : r.spectrum.lambdas) out << ',' << format_double(l);
    out << ',' << format_double(r.f_min) << ',' << format_double(r.f_max) << ','
        << format_double(r.nu2) << ',' << format_double(r.nu_inf) << ','
        << r.flags.fmax_multiplicative << r.flags.fmin_multiplicative << r.flags.nuinf_equals_fmax
        << r.flags.nuinf_multiplicative << '\n';
  }
  return out.str();
}

}  // namespace gpcfid
