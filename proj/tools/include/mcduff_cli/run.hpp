#pragma once

#include "mcduff/certificate.hpp"
#include "mcduff_cli/config.hpp"

#include <iosfwd>
#include <string>

namespace mcduff::cli {

enum ExitStatus { kPass = 0, kFail = 1, kUsage = 2 };

/// Runs the configured driver. Throws ConfigError (or std::invalid_argument
/// from the engines) on bad parameters.
Certificate build_certificate(const RunConfig& config);

/// One row per grid point, params first, then value/approx/pass columns per item.
std::string run_sweep(const RunConfig& config);

/// Writes the certificate or CSV to config.output ("-" = `out`) and returns
/// the exit status; diagnostics go to `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Re-parses and re-decides a certificate file.
int validate_file(const std::string& path, const PrecisionPolicy& policy, std::ostream& out, std::ostream& err);

std::string csv_field(const std::string& s);

}  // namespace mcduff::cli
