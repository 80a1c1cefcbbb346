#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace linklab::cli {

enum ExitCode : int {
  ok = 0,
  internal_error = 1,
  usage_error = 2,
  missing_input = 3,
  format_error = 4,
  evaluation_error = 5,
  write_error = 6,
};

inline constexpr const char* kVersion = "0.1.0";

// Runs one subcommand; `args` excludes the program name. Diagnostics go to
// `err`, the one-line summary to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// zlib crc32 of a file's bytes, as 8 lowercase hex digits.
std::string file_crc32(const std::filesystem::path& path);

}  // namespace linklab::cli
