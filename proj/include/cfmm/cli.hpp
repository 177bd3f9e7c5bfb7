#pragma once

#include <iosfwd>
#include <string>

#include "cfmm/spec_io.hpp"

namespace cfmm::cli {

enum ExitCode : int { kOk = 0, kDomainError = 1, kUsageError = 2, kNotConverged = 3 };

/// Runs one subcommand. JSON (or CSV for export-curve) goes to `out`,
/// diagnostics as JSON to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Serializes with 17 significant digits; non-finite numbers become "inf",
/// "-inf" or "nan" strings. Identical values give identical bytes.
std::string dump(const io::Json& value);

}  // namespace cfmm::cli
