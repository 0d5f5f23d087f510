#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace gbsk::cli {

inline constexpr const char *kVersion = "0.1.0";

/// Exit codes besides the per-family ones from gbsk::exit_code().
inline constexpr int kExitOk = 0;
inline constexpr int kExitUnexpected = 1;
inline constexpr int kExitUsage = 2;

/// Runs the tool on `args` (program name excluded) and returns the exit code.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Hex SHA-256 of a file's bytes.
std::string file_digest(const std::filesystem::path &path);

/// Hex SHA-256 of a string.
std::string text_digest(const std::string &text);

}  // namespace gbsk::cli
