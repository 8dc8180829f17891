#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "gpcfid/errors.hpp"
#include "gpcfid/io.hpp"
#include "support.hpp"

using namespace gpcfid;
using testing::family;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::Parse;
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "gpcfid_test_io";
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST_CASE("MUB files round-trip") {
  for (int d : {2, 3, 5}) {
    const MubFamily fam = build_mub_family(d);
    const json j = mub_to_json(fam);
    CHECK(j.at("d") == d);
    CHECK(j.at("bases").size() == std::size_t(d + 1));
    const MubFamily back = mub_from_json(json::parse(j.dump()));
    for (int alpha = 1; alpha <= d + 1; ++alpha) CHECK(max_abs(back.basis(alpha) - fam.basis(alpha)) == 0.0);
  }
  json j = mub_to_json(build_mub_family(3));
  j["bases"][1][0][1][0] = j["bases"][1][0][1][0].get<double>() + 0.01;
  CHECK(kind_of([&] { (void)mub_from_json(j); }) == ErrorKind::InvalidFamily);
  CHECK(kind_of([&] { (void)mub_from_json(json{{"d", 3}}); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { (void)mub_from_json(json{{"d", 2}, {"bases", "x"}}); }) == ErrorKind::Parse);
}

TEST_CASE("reading files") {
  const fs::path dir = scratch();
  write(dir / "broken.json", "{\"d\": 2,");
  CHECK(kind_of([&] { (void)read_json_file(dir / "broken.json"); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { (void)read_json_file(dir / "missing.json"); }) == ErrorKind::Parse);

  std::ofstream(dir / "fam3.json") << mub_to_json(build_mub_family(3)).dump();
  write(dir / "spec.json", R"({"d": 3, "eigenvalues": [0.4, 0.2, 0.1, 0.2], "mub_file": "fam3.json"})");
  const ChannelSpec spec = parse_channel_spec(read_json_file(dir / "spec.json"), dir);
  REQUIRE(spec.mub_file.has_value());
  CHECK(*spec.mub_file == dir / "fam3.json");
  auto fam = resolve_family(spec.d, spec.mub_file);
  CHECK(f_extremes(build_channel(spec, fam)).f_max == doctest::Approx(0.6));
  CHECK(kind_of([&] { (void)resolve_family(2, spec.mub_file); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("channel specs") {
  auto spec = parse_channel_spec(json::parse(R"({"d": 2, "probabilities": [0.7, 0.1, 0.1, 0.1]})"));
  CHECK(spec_spectrum(spec).lambdas[0] == doctest::Approx(0.6));

  auto bad = [](const char* text) {
    return kind_of([&] { (void)parse_channel_spec(json::parse(text)); });
  };
  CHECK(bad(R"({"probabilities": [1, 0, 0, 0]})") == ErrorKind::Parse);
  CHECK(bad(R"({"d": 2})") == ErrorKind::Parse);
  CHECK(bad(R"({"d": 2, "probabilities": [1, 0, 0, 0], "eigenvalues": [1, 1, 1]})") == ErrorKind::Parse);
  CHECK(bad(R"({"d": 2, "probabilities": [1, 0, 0]})") == ErrorKind::Parse);
  CHECK(bad(R"({"d": "two", "eigenvalues": [1, 1, 1]})") == ErrorKind::Parse);

  // small drift is normalized, larger drift rejected
  spec = parse_channel_spec(json::parse(R"({"d": 2, "probabilities": [0.7, 0.1, 0.1, 0.1000000002]})"));
  const auto ch = build_channel(spec, family(2));
  double total = 0;
  for (double p : ch.probabilities()) total += p;
  CHECK(std::abs(total - 1.0) < 1e-15);
  spec = parse_channel_spec(json::parse(R"({"d": 2, "probabilities": [0.7, 0.1, 0.1, 0.11]})"));
  CHECK(kind_of([&] { (void)build_channel(spec, family(2)); }) == ErrorKind::BadProbabilities);

  spec = parse_channel_spec(json::parse(R"({"d": 3, "eigenvalues": [0.5, 0.2, -0.1, 0.3]})"));
  CHECK_THROWS_AS((void)build_channel(spec, family(3)), NotCptpError);
  CHECK(spec_spectrum(spec).lambdas.size() == 4);
}

TEST_CASE("evolution specs") {
  auto e = parse_evolution_spec(json::parse(R"({"d": 2, "rates": [1, 1, 1]})"));
  CHECK(e.kind() == EvolutionSpec::Kind::ExponentialRates);
  e = parse_evolution_spec(json::parse(R"({"d": 2, "trajectory": [{"t": 0, "lambdas": [1, 1, 1]},
                                                                  {"t": 1, "lambdas": [0.5, 0.5, 0.5]}]})"));
  CHECK(e.kind() == EvolutionSpec::Kind::SampledTrajectory);
  CHECK(e.samples().size() == 2);
  CHECK(kind_of([&] { (void)parse_evolution_spec(json::parse(R"({"d": 2})")); }) == ErrorKind::Parse);
  CHECK(kind_of([&] { (void)parse_evolution_spec(json::parse(R"({"d": 2, "rates": [1, -1, 1]})")); }) ==
        ErrorKind::InvalidTrajectory);
}

TEST_CASE("serialization") {
  const auto ch = channel_from_eigenvalues(3, std::vector<double>{0.4, 0.2, 0.1, 0.2}, family(3));
  const json r = to_json(fidelity_report(ch));
  CHECK(r.at("f_max").get<double>() == doctest::Approx(0.6));
  CHECK(r.at("nu_inf_exact") == true);
  CHECK(r.at("flags").at("fmax_multiplicative") == true);

  OracleConfig cfg;
  cfg.restarts = 16;
  const json o = to_json(oracle_self_fidelity(ch, Sense::Max, cfg), &ch.family());
  CHECK(o.at("restarts") == 16);
  CHECK(o.at("state_mub").at("alpha") == 1);

  const auto reg = to_json(regularized_fmax(ch, 2, RegularizationMode::Closed));
  CHECK(reg.at("exact") == true);
  CHECK(reg.at("value").get<double>() == doctest::Approx(0.6));

  auto fam = family(3);
  CHECK(match_mub_vector(*fam, std::complex<double>(0, 1) * fam->vector(2, 1)) == std::pair{2, 1});
  std::mt19937_64 rng(51);
  CHECK_FALSE(match_mub_vector(*fam, random_pure_state(3, rng)).has_value());

  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("timeline CSV") {
  const auto spec = EvolutionSpec::exponential(family(2), {1, 1, 1});
  const auto rows = timeline_report(spec, uniform_grid(1, 3));
  const std::string csv = timeline_csv(rows);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,lambda_1,lambda_2,lambda_3,f_min,f_max,nu2,nu_inf,flags");
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    CHECK(std::count(line.begin(), line.end(), ',') == 8);
    CHECK(line.substr(line.size() - 4) == "1011");
  }
  CHECK(n == 3);
}
