#pragma once
// Command-line front end. run_cli is the whole program minus main(), so
// tests can drive it in-process.

#include <iosfwd>
#include <string>
#include <vector>

namespace hstab::cli {

enum ExitCode { kOk = 0, kFailed = 1, kUsage = 2, kBudget = 3 };

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Hex SHA-256 of a string.
std::string sha256_hex(const std::string& data);

/// "5", "5:15" (step 1), "5:15:2", or "5,7,9".
std::vector<int> parse_int_range(const std::string& text);

}  // namespace hstab::cli
