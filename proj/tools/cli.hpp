#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gbmt/bmt.hpp"
#include "run_config.hpp"

namespace gbmt::cli {

enum ExitCode : int { kPass = 0, kThresholdFail = 1, kConfigError = 2, kNumericalAbort = 3 };

struct CommandOptions {
  std::optional<double> threshold;
  std::optional<std::uint64_t> seed;
  std::string table_path;  // verify: node -> residual CSV
};

// Shortest decimal string that reads back to the same double.
std::string format_double(double v);

void write_bmt_header(std::ostream& os);
void write_bmt_row(std::ostream& os, const BMTState& st, const InvariantLog& inv);

// Each command writes its primary output (CSV or JSON report) to out and a
// human-readable summary to log, and returns an ExitCode.
int simulate_bmt(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out,
                 std::ostream& log);
int simulate_super(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out,
                   std::ostream& log);
int compare(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& log);
int verify(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& log);

// Full command line: spinsim <subcommand> --config PATH [--out PATH]
// [--threshold REAL] [--seed INT] [--table PATH].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gbmt::cli
