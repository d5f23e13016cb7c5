#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "horncode/report.hpp"

namespace horncode {

// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitCheckFailed = 1, kExitUsage = 2, kExitInput = 3 };

struct RunReport {
  std::string command;                        // argv joined with spaces
  std::map<std::string, std::string> inputs;  // file path -> "crc32:xxxxxxxx"
  std::vector<CheckResult> checks;

  // Header line, one line per check, then a summary line; byte-stable for fixed inputs.
  std::string json_lines() const;
  std::string human() const;
};

struct RunResult {
  int exit_code = kExitOk;
  RunReport report;
};

// Subcommands: code, equiv, contact, estimate, normal-form, corpus, generate.
// Primary output goes to `out`, diagnostics to `err`. HORNCODE_THREADS caps OpenMP
// threads; --seed overrides the sampling seed.
RunResult run_command(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace horncode
