#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "bosegas/config.hpp"

namespace bosegas::cli {

enum ExitCode { ok = 0, numeric_failure = 1, config_error = 2, io_error = 3 };

/// Parses arguments (without the program name), runs the subcommand and
/// returns the exit code. Results go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args);

/// Executes an already resolved configuration. Returns the result record
/// (JSON) or, for bounds sweeps, writes the CSV and returns a summary record.
nlohmann::json execute(const RunConfig& cfg, std::ostream& out);

}  // namespace bosegas::cli
