#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "gpcfid/errors.hpp"

namespace gpcfid::cli {

// Exit codes
inline constexpr int kExitOk = 0;
inline constexpr int kExitSelftestFailed = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitInvalid = 3;
inline constexpr int kExitResource = 4;

int exit_code_for(ErrorKind kind) noexcept;

/// Lowercase hex SHA-256 of a file's bytes; throws Parse if unreadable.
std::string sha256_file(const std::filesystem::path& path);

/// Runs one command line (argv[0] is the program name). Reports and CSV go to
/// `out` unless redirected to files; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gpcfid::cli
