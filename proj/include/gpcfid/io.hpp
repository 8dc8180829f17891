#pragma once

// File formats:
//   MUB file       {"d": int, "bases": [[[re, im] x d] x d vectors] x (d+1) bases}
//   channel spec   {"d": int, "probabilities": [...]} or {"d": int, "eigenvalues": [...]},
//                  optional "mub_file": path (relative paths resolve against the spec's folder)
//   evolution spec {"d": int, "rates": [...]} or
//                  {"d": int, "trajectory": [{"t": x, "lambdas": [...]}, ...]}, optional "mub_file"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gpcfid/channel.hpp"
#include "gpcfid/dynamics.hpp"
#include "gpcfid/metrics.hpp"
#include "gpcfid/mub.hpp"
#include "gpcfid/oracle.hpp"

namespace gpcfid {

using json = nlohmann::json;

/// Tolerance used when re-validating a MUB family read from disk.
inline constexpr double kMubFileTol = 1e-10;
/// Largest probability-sum drift a channel spec may carry; it is normalized away.
inline constexpr double kProbabilityDrift = 1e-9;

json mub_to_json(const MubFamily& fam);
/// Throws Parse on malformed input and InvalidFamily when validation fails.
MubFamily mub_from_json(const json& j);
MubFamily load_mub_file(const std::filesystem::path& path);

/// Reads and parses a JSON document; throws Parse.
json read_json_file(const std::filesystem::path& path);

struct ChannelSpec {
  int d = 0;
  std::optional<std::vector<double>> probabilities;
  std::optional<std::vector<double>> eigenvalues;
  std::optional<std::filesystem::path> mub_file;  // already resolved
};

ChannelSpec parse_channel_spec(const json& j, const std::filesystem::path& base_dir = {});

/// Built-in family for d, or the family in `mub_file`.
std::shared_ptr<const MubFamily> resolve_family(int d, const std::optional<std::filesystem::path>& mub_file);

/// The spectrum a spec describes, valid or not. Throws Parse/DimensionMismatch.
Spectrum spec_spectrum(const ChannelSpec& spec);

/// Builds the channel: normalizes a probability sum drift up to 1e-9, rejects
/// anything larger (BadProbabilities) and non-CPTP spectra (NotCptpError).
GeneralizedPauliChannel build_channel(const ChannelSpec& spec, std::shared_ptr<const MubFamily> fam);

EvolutionSpec parse_evolution_spec(const json& j, const std::filesystem::path& base_dir = {});

json to_json(const Spectrum& sp);
json to_json(const FujiwaraAlgoetCheck& fa);
json to_json(const MultiplicativityFlags& f);
json to_json(const Attainment& a);
json to_json(const FidelityReport& r);
json to_json(const RegularizedFmax& r);
json to_json(const ScanReport& r);
/// Summary of an oracle run; `fam` (optional) is used to name a MUB vector the
/// best state coincides with.
json to_json(const OracleResult& r, const MubFamily* fam = nullptr);

/// Locates (alpha, k) with |<psi_k^alpha|psi>|^2 >= 1 - tol.
std::optional<std::pair<int, int>> match_mub_vector(const MubFamily& fam, const StateVector& psi,
                                                    double tol = 1e-8);

/// CSV with columns t, lambda_1..lambda_{d+1}, f_min, f_max, nu2, nu_inf, flags.
/// `flags` is four 0/1 characters: fmax_multiplicative, fmin_multiplicative,
/// nuinf_equals_fmax, nuinf_multiplicative.
std::string timeline_csv(const std::vector<TimelineRow>& rows);

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

}  // namespace gpcfid
