#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gpcfid/cli.hpp"
#include "gpcfid/io.hpp"

using namespace gpcfid;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "gpcfid");
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path dir() {
  const fs::path d = fs::temp_directory_path() / "gpcfid_test_cli";
  fs::create_directories(d);
  return d;
}

std::string file(const std::string& name, const std::string& text) {
  const fs::path p = dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("exit code mapping") {
  CHECK(cli::exit_code_for(ErrorKind::Parse) == 2);
  CHECK(cli::exit_code_for(ErrorKind::UnsupportedDimension) == 2);
  CHECK(cli::exit_code_for(ErrorKind::NotCptp) == 3);
  CHECK(cli::exit_code_for(ErrorKind::InvalidTrajectory) == 3);
  CHECK(cli::exit_code_for(ErrorKind::TooLarge) == 4);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"--version"}).code == 0);
  CHECK(run({"analyze"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
}

TEST_CASE("analyze") {
  const auto id = file("ident2.json", R"({"d": 2, "probabilities": [1, 0, 0, 0]})");
  Run r = run({"analyze", id});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  for (const char* key : {"f_min", "f_max", "nu2", "nu_inf"}) CHECK(j["metrics"][key].get<double>() == 1.0);
  CHECK(j["manifest"]["inputs"][0]["sha256"] == cli::sha256_file(id));
  CHECK_FALSE(j["manifest"].contains("duration_seconds"));

  const auto q = file("q3.json", R"({"d": 3, "eigenvalues": [0.4, 0.2, 0.1, 0.2]})");
  r = run({"analyze", q, "--oracle", "--seed", "7", "--restarts", "64"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["metrics"]["f_max"].get<double>() == doctest::Approx(0.6));
  CHECK(j["metrics"]["nu_inf"].get<double>() == doctest::Approx(0.6));
  CHECK(j["oracle"]["agrees"] == true);
  CHECK(j["oracle"]["max_residual"].get<double>() <= 1e-6);
  CHECK(j["manifest"]["seed"] == 7);

  const auto out = (dir() / "report.json").string();
  r = run({"analyze", q, "--out", out, "--timing"});
  CHECK(r.code == 0);
  CHECK(json::parse(slurp(out))["manifest"].contains("duration_seconds"));
}

TEST_CASE("invalid channels") {
  const auto bad = file("bad.json", R"({"d": 3, "eigenvalues": [0.5, 0.2, -0.1, 0.3]})");
  Run r = run({"analyze", bad});
  CHECK(r.code == 3);
  CHECK(r.err.find("upper") != std::string::npos);

  r = run({"analyze", bad, "--allow-noncptp"});
  CHECK(r.code == 0);
  CHECK_FALSE(r.err.empty());
  CHECK(json::parse(r.out)["channel"]["cptp"] == false);

  CHECK(run({"validate", bad}).code == 3);
  CHECK(run({"validate", file("ok.json", R"({"d": 2, "eigenvalues": [1, 1, 1]})")}).code == 0);
  CHECK(run({"analyze", file("junk.json", "{ nope")}).code == 2);
  CHECK(run({"analyze", (dir() / "absent.json").string()}).code == 2);
  CHECK(run({"mub", "--d", "4"}).code == 2);
}

TEST_CASE("tensor probes") {
  const auto id = file("ident2.json", R"({"d": 2, "probabilities": [1, 0, 0, 0]})");
  Run r = run({"tensor", id, "--n", "2", "--restarts", "32"});
  REQUIRE(r.code == 0);
  json j = json::parse(r.out);
  CHECK(j["probe"]["estimate"].get<double>() == doctest::Approx(1.0));
  CHECK(j["probe"]["verdict"] == "corollary regime");

  const auto neg = file("neg.json", R"({"d": 2, "probabilities": [0, 0.3333333333333333, 0.3333333333333333, 0.3333333333333334]})");
  r = run({"tensor", neg, "--n", "2", "--restarts", "64"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["probe"]["verdict"] == "open regime");
  CHECK(j["probe"]["estimate"].get<double>() >= 1.0 / 9.0);
  CHECK_FALSE(j["probe"].contains("within_tolerance"));

  CHECK(run({"tensor", id, "--n", "7"}).code == 4);
}

TEST_CASE("evolve") {
  const auto spec = file("evo.json", R"({"d": 2, "rates": [1, 1, 1]})");
  const auto csv = (dir() / "evo.csv").string();
  Run r = run({"evolve", spec, "--t-max", "2", "--steps", "100", "--csv", csv});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["valid"] == true);
  CHECK(j["final"]["f_max"].get<double>() == doctest::Approx((1 + std::exp(-4.0)) / 2).epsilon(1e-12));

  std::istringstream in(slurp(csv));
  std::string line;
  std::getline(in, line);
  int rows = 0;
  double prev = 2;
  while (std::getline(in, line)) {
    ++rows;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    const double fmax = std::stod(cells[5]);
    CHECK(fmax <= prev);
    prev = fmax;
  }
  CHECK(rows == 100);

  const auto bad = file("evo_bad.json", R"({"d": 2, "trajectory": [{"t": 0, "lambdas": [1, 1, 1]},
      {"t": 1, "lambdas": [-0.05, 0.4, 0.4]}, {"t": 2, "lambdas": [0.2, 0.2, 0.2]}]})");
  r = run({"evolve", bad, "--t-max", "2", "--steps", "2"});
  CHECK(r.code == 3);
  CHECK(r.err.find("t = 1") != std::string::npos);
}

TEST_CASE("selftest") {
  Run r = run({"selftest", "--d", "2,3", "--restarts", "16"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
  r = run({"selftest", "--d", "3", "--restarts", "16", "--corrupt-mub"});
  CHECK(r.code == 1);
  CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("separate processes write identical reports") {
  const auto q = file("q3.json", R"({"d": 3, "eigenvalues": [0.4, 0.2, 0.1, 0.2]})");
  const fs::path a = dir() / "a.json", b = dir() / "b.json";
  for (const auto& [path, threads] : {std::pair{a, "1"}, std::pair{b, "3"}}) {
    const std::string cmd = std::string(GPCFID_TOOL) + " analyze " + q + " --oracle --restarts 32 --seed 11 --threads " +
                            threads + " --out " + path.string();
    REQUIRE(std::system(cmd.c_str()) == 0);
  }
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).size() > 100);
}

TEST_CASE("mub export validates on reload") {
  const auto out = (dir() / "mub5.json").string();
  REQUIRE(run({"mub", "--d", "5", "--out", out}).code == 0);
  const json j = json::parse(slurp(out));
  CHECK(j.contains("manifest"));
  CHECK(run({"validate", out}).code == 0);
}
