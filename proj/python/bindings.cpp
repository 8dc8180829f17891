#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gpcfid/channel.hpp"
#include "gpcfid/dynamics.hpp"
#include "gpcfid/errors.hpp"
#include "gpcfid/metrics.hpp"
#include "gpcfid/mub.hpp"
#include "gpcfid/oracle.hpp"

namespace py = pybind11;
using namespace gpcfid;

namespace {

using FamilyPtr = std::shared_ptr<MubFamily>;

std::shared_ptr<const MubFamily> family_or_builtin(int d, const FamilyPtr& fam) {
  if (fam) return fam;
  return std::make_shared<const MubFamily>(build_mub_family(d));
}

Sense parse_sense(const std::string& s) {
  if (s == "max") return Sense::Max;
  if (s == "min") return Sense::Min;
  throw py::value_error("sense must be 'max' or 'min'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Generalized Pauli channels over mutually unbiased bases";
  m.attr("__version__") = "0.1.0";

  auto& error_type = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<NotCptpError>(m, "NotCptpError", error_type.ptr());

  // ---- mub
  py::class_<MubFamily, FamilyPtr>(m, "MubFamily")
      .def(py::init([](int d, std::vector<ComplexMatrix> bases) {
             return std::make_shared<MubFamily>(d, std::move(bases));
           }),
           py::arg("d"), py::arg("bases"))
      .def_property_readonly("dimension", &MubFamily::dimension)
      .def_property_readonly("basis_count", &MubFamily::basis_count)
      .def("basis", &MubFamily::basis, py::arg("alpha"))
      .def("vector", &MubFamily::vector, py::arg("alpha"), py::arg("k"))
      .def("projector", &MubFamily::projector, py::arg("alpha"), py::arg("k"));

  py::class_<MubValidation>(m, "MubValidation")
      .def_readonly("orthonormality_residual", &MubValidation::orthonormality_residual)
      .def_readonly("unbiasedness_residual", &MubValidation::unbiasedness_residual)
      .def_readonly("tol", &MubValidation::tol)
      .def_property_readonly("passed", &MubValidation::passed);

  m.def("build_mub_family", [](int d) { return std::make_shared<MubFamily>(build_mub_family(d)); },
        py::arg("d"));
  m.def("validate_mub_family", &validate_mub_family, py::arg("family"), py::arg("tol") = 1e-12);
  m.def("unbiased_unitary", &unbiased_unitary, py::arg("family"), py::arg("alpha"), py::arg("k"));

  // ---- channel
  py::class_<FujiwaraAlgoetCheck>(m, "FujiwaraAlgoetCheck")
      .def_readonly("sum", &FujiwaraAlgoetCheck::sum)
      .def_readonly("lower_slack", &FujiwaraAlgoetCheck::lower_slack)
      .def_readonly("upper_slack", &FujiwaraAlgoetCheck::upper_slack)
      .def("passed", &FujiwaraAlgoetCheck::passed, py::arg("tol") = 1e-12);

  m.def("fujiwara_algoet_check",
        [](int d, std::vector<double> lambdas) { return fujiwara_algoet_check(Spectrum{d, std::move(lambdas)}); },
        py::arg("d"), py::arg("eigenvalues"));
  m.def("probabilities_of",
        [](int d, std::vector<double> lambdas) { return probabilities_of(Spectrum{d, std::move(lambdas)}); },
        py::arg("d"), py::arg("eigenvalues"));
  m.def("eigenvalues_of",
        [](int d, std::vector<double> probs) { return spectrum_from_probabilities(d, probs).lambdas; },
        py::arg("d"), py::arg("probabilities"));

  py::class_<GeneralizedPauliChannel>(m, "GeneralizedPauliChannel")
      .def_property_readonly("dimension", &GeneralizedPauliChannel::dimension)
      .def_property_readonly("probabilities",
                             [](const GeneralizedPauliChannel& ch) {
                               return std::vector<double>(ch.probabilities().begin(), ch.probabilities().end());
                             })
      .def_property_readonly("eigenvalues", [](const GeneralizedPauliChannel& ch) { return spectrum_of(ch).lambdas; })
      .def("apply", [](const GeneralizedPauliChannel& ch, const ComplexMatrix& x) { return apply_channel(ch, x); },
           py::arg("x"))
      .def("superoperator", &superoperator_of)
      .def("choi", &choi_of);

  m.def("channel_from_probabilities",
        [](int d, std::vector<double> probs, const FamilyPtr& fam) {
          return channel_from_probabilities(d, std::move(probs), family_or_builtin(d, fam));
        },
        py::arg("d"), py::arg("probabilities"), py::arg("family") = nullptr);
  m.def("channel_from_eigenvalues",
        [](int d, std::vector<double> lambdas, const FamilyPtr& fam) {
          return channel_from_eigenvalues(d, lambdas, family_or_builtin(d, fam));
        },
        py::arg("d"), py::arg("eigenvalues"), py::arg("family") = nullptr);
  m.def("compose", &compose, py::arg("a"), py::arg("b"));
  m.def("choi_from_superoperator", &choi_from_superoperator, py::arg("superop"), py::arg("d"));

  // ---- metrics
  py::class_<FidelityExtremes>(m, "FidelityExtremes")
      .def_readonly("f_min", &FidelityExtremes::f_min)
      .def_readonly("f_max", &FidelityExtremes::f_max)
      .def_readonly("argmin_alpha", &FidelityExtremes::argmin_alpha)
      .def_readonly("argmax_alpha", &FidelityExtremes::argmax_alpha);

  py::class_<MultiplicativityFlags>(m, "MultiplicativityFlags")
      .def_readonly("fmax_multiplicative", &MultiplicativityFlags::fmax_multiplicative)
      .def_readonly("fmin_multiplicative", &MultiplicativityFlags::fmin_multiplicative)
      .def_readonly("nuinf_equals_fmax", &MultiplicativityFlags::nuinf_equals_fmax)
      .def_readonly("nuinf_multiplicative", &MultiplicativityFlags::nuinf_multiplicative);

  py::class_<Attainment>(m, "Attainment")
      .def_readonly("argmax_alpha", &Attainment::argmax_alpha)
      .def_readonly("argmin_alpha", &Attainment::argmin_alpha)
      .def_readonly("nu2_alpha", &Attainment::nu2_alpha)
      .def_readonly("nu_inf_positive_branch", &Attainment::nu_inf_positive_branch)
      .def_readonly("nu_inf_alpha", &Attainment::nu_inf_alpha);

  py::class_<FidelityReport>(m, "FidelityReport")
      .def_property_readonly("eigenvalues", [](const FidelityReport& r) { return r.spectrum.lambdas; })
      .def_readonly("f_min", &FidelityReport::f_min)
      .def_readonly("f_max", &FidelityReport::f_max)
      .def_readonly("nu2", &FidelityReport::nu2)
      .def_readonly("nu_inf", &FidelityReport::nu_inf)
      .def_readonly("nu_inf_exact", &FidelityReport::nu_inf_exact)
      .def_readonly("flags", &FidelityReport::flags)
      .def_readonly("attainment", &FidelityReport::attainment)
      .def_readonly("regularized_exact", &FidelityReport::regularized_exact);

  py::class_<RegularizedFmax>(m, "RegularizedFmax")
      .def_readonly("n", &RegularizedFmax::n)
      .def_readonly("exact", &RegularizedFmax::exact)
      .def_readonly("value", &RegularizedFmax::value)
      .def_readonly("lower", &RegularizedFmax::lower)
      .def_readonly("upper", &RegularizedFmax::upper)
      .def_readonly("oracle_root", &RegularizedFmax::oracle_root);

  m.def("f_extremes", &f_extremes, py::arg("channel"));
  m.def("nu2", &nu2, py::arg("channel"));
  m.def("nu_inf", &nu_inf, py::arg("channel"));
  m.def("nu2_fmax_identity", &nu2_fmax_identity, py::arg("channel"));
  m.def("multiplicativity_class",
        py::overload_cast<const GeneralizedPauliChannel&>(&multiplicativity_class), py::arg("channel"));
  m.def("fidelity_report", &fidelity_report, py::arg("channel"));
  m.def("pointwise_fidelity",
        [](const GeneralizedPauliChannel& ch, const StateVector& psi) {
          return pointwise_fidelity(ch, make_pure_state(ch.family(), psi));
        },
        py::arg("channel"), py::arg("psi"));

  // ---- oracle
  py::class_<OracleConfig>(m, "OracleConfig")
      .def(py::init<>())
      .def_readwrite("restarts", &OracleConfig::restarts)
      .def_readwrite("max_iters", &OracleConfig::max_iters)
      .def_readwrite("step_tol", &OracleConfig::step_tol)
      .def_readwrite("value_tol", &OracleConfig::value_tol)
      .def_readwrite("seed", &OracleConfig::seed)
      .def_readwrite("threads", &OracleConfig::threads);

  py::class_<OracleResult>(m, "OracleResult")
      .def_readonly("value", &OracleResult::value)
      .def_readonly("state", &OracleResult::state)
      .def_readonly("dual_state", &OracleResult::dual_state)
      .def_readonly("best_restart", &OracleResult::best_restart)
      .def_readonly("restart_count", &OracleResult::restart_count)
      .def_readonly("seed", &OracleResult::seed);

  py::class_<ProbeReport>(m, "ProbeReport")
      .def_readonly("n", &ProbeReport::n)
      .def_readonly("estimate", &ProbeReport::estimate)
      .def_readonly("baseline", &ProbeReport::baseline)
      .def_readonly("excess", &ProbeReport::excess)
      .def_readonly("corollary_regime", &ProbeReport::corollary_regime);

  py::class_<ScanReport>(m, "ScanReport")
      .def_readonly("count", &ScanReport::count)
      .def_readonly("disagreements", &ScanReport::disagreements)
      .def_readonly("fujiwara_algoet_passes", &ScanReport::fujiwara_algoet_passes)
      .def_readonly("choi_passes", &ScanReport::choi_passes)
      .def_readonly("boundary_count", &ScanReport::boundary_count);

  m.def("oracle_self_fidelity",
        [](const GeneralizedPauliChannel& ch, const std::string& sense, const OracleConfig& cfg) {
          const Sense s = parse_sense(sense);
          py::gil_scoped_release release;
          return oracle_self_fidelity(ch, s, cfg);
        },
        py::arg("channel"), py::arg("sense") = "max", py::arg("config") = OracleConfig{});
  m.def("oracle_nu2", py::overload_cast<const GeneralizedPauliChannel&, const OracleConfig&>(&oracle_nu2),
        py::arg("channel"), py::arg("config") = OracleConfig{}, py::call_guard<py::gil_scoped_release>());
  m.def("oracle_nu_inf", py::overload_cast<const GeneralizedPauliChannel&, const OracleConfig&>(&oracle_nu_inf),
        py::arg("channel"), py::arg("config") = OracleConfig{}, py::call_guard<py::gil_scoped_release>());
  m.def("tensor_multiplicativity_probe", &tensor_multiplicativity_probe, py::arg("channel"), py::arg("n"),
        py::arg("config") = OracleConfig::tensor_defaults(), py::call_guard<py::gil_scoped_release>());
  m.def("regularized_fmax",
        [](const GeneralizedPauliChannel& ch, int n, bool oracle, const OracleConfig& cfg) {
          py::gil_scoped_release release;
          return regularized_fmax(ch, n, oracle ? RegularizationMode::Oracle : RegularizationMode::Closed, &cfg);
        },
        py::arg("channel"), py::arg("n"), py::arg("oracle") = false,
        py::arg("config") = OracleConfig::tensor_defaults());
  m.def("cptp_equivalence_scan",
        [](const FamilyPtr& fam, int random_draws, int boundary_points, int violations, std::uint64_t seed,
           double tol) {
          ScanGrid grid;
          grid.random_draws = random_draws;
          grid.boundary_points = boundary_points;
          grid.violations = violations;
          grid.seed = seed;
          py::gil_scoped_release release;
          return cptp_equivalence_scan(*fam, grid, tol);
        },
        py::arg("family"), py::arg("random_draws") = 10000, py::arg("boundary_points") = 200,
        py::arg("violations") = 200, py::arg("seed") = 1, py::arg("tol") = 1e-10);
  m.def("eigenrelation_check", &eigenrelation_check, py::arg("channel"));

  // ---- dynamics
  py::class_<EvolutionSpec>(m, "EvolutionSpec")
      .def_property_readonly("dimension", &EvolutionSpec::dimension)
      .def_property_readonly("rates", &EvolutionSpec::rates);

  m.def("exponential_evolution",
        [](int d, std::vector<double> rates, const FamilyPtr& fam) {
          return EvolutionSpec::exponential(family_or_builtin(d, fam), std::move(rates));
        },
        py::arg("d"), py::arg("rates"), py::arg("family") = nullptr);
  m.def("sampled_evolution",
        [](int d, const std::vector<std::pair<double, std::vector<double>>>& samples, const FamilyPtr& fam) {
          std::vector<TrajectorySample> s;
          for (const auto& [t, l] : samples) s.push_back({t, l});
          return EvolutionSpec::sampled(family_or_builtin(d, fam), std::move(s));
        },
        py::arg("d"), py::arg("samples"), py::arg("family") = nullptr);
  m.def("trajectory_at", [](const EvolutionSpec& s, double t) { return trajectory_at(s, t).lambdas; },
        py::arg("spec"), py::arg("t"));
  m.def("first_violation",
        [](const EvolutionSpec& s, const std::vector<double>& grid) {
          return validate_trajectory(s, validation_nodes(s, grid)).first_violation;
        },
        py::arg("spec"), py::arg("times"));
  m.def("timeline",
        [](const EvolutionSpec& s, const std::vector<double>& grid) {
          std::vector<std::pair<double, FidelityReport>> out;
          for (auto& row : timeline_report(s, grid)) out.emplace_back(row.t, std::move(row.report));
          return out;
        },
        py::arg("spec"), py::arg("times"));
  m.def("propagator_by_expm", &propagator_by_expm, py::arg("spec"), py::arg("t"));
  m.def("uniform_grid", &uniform_grid, py::arg("t_max"), py::arg("steps"));
}
