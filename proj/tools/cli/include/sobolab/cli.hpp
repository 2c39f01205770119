#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sobolab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolations = 2;

/// Runs one command line (without the program name). The JSON report is
/// printed to `out`; diagnostics and written artifact paths go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t value);

/// "1,2,inf" or an inclusive range "start:stop:step".
std::vector<double> parse_number_list(const std::string& text);

/// Names of the available commands, in help order.
std::vector<std::string> command_names();

}  // namespace sobolab::cli
