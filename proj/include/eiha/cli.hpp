#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "eiha/trial.hpp"

namespace eiha {

/// Exit statuses of the command line tool.
enum ExitStatus : int {
  kExitOk = 0,
  kExitFailure = 1,   // unreadable input, failed run, replay mismatch
  kExitUsage = 2,     // bad or unknown flags
};

/// Success table, Fisher tests of stm4 against every other condition, mean
/// times to learn and permutation tests on those times.
std::string stats_report(const std::vector<TrialResult>& results, int resamples,
                         std::uint64_t seed);

/// Entry point; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eiha
