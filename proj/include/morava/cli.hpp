#pragma once

// Command-line front end. Every subcommand writes one JSON envelope
// {tool_version, params, payload, status} or, for tabular output, TSV.
// Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.

#include <ostream>
#include <span>
#include <string>

namespace morava::cli {

inline constexpr const char* kToolVersion = "0.1.0";

/// args excludes the program name.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

} // namespace morava::cli
