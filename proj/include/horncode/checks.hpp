#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "horncode/random_codes.hpp"
#include "horncode/report.hpp"

namespace horncode {

struct SuiteOptions {
  std::uint64_t seed = kDefaultSeed;
  std::filesystem::path data_dir = HORNCODE_DATA_DIR;
};

struct CriterionOutcome {
  int id = 0;
  CheckResult check;
  double seconds = 0.0;  // wall time; kept out of the machine-readable check
};

struct Criterion {
  int id;
  std::string name;
  std::function<CheckResult(const SuiteOptions&)> run;
};

// The fourteen acceptance criteria, in order.
const std::vector<Criterion>& acceptance_criteria();

// Runs one criterion; library errors become a failed check carrying the message.
CriterionOutcome run_criterion(const Criterion& c, const SuiteOptions& opts);

std::vector<CriterionOutcome> run_acceptance(const SuiteOptions& opts);

// One check per checked-in example strata file against its reference code.
std::vector<CheckResult> corpus_entry_checks(const std::filesystem::path& data_dir);

}  // namespace horncode
