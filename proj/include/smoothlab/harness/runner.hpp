#pragma once

#include <cstddef>
#include <filesystem>
#include <string>

#include "smoothlab/harness/scenario.hpp"

namespace smoothlab::harness {

enum ExitCode : int { kExitOk = 0, kExitInvalidConfig = 2, kExitBoundViolation = 3, kExitPartialFailure = 4 };

struct RunOutcome {
  int exit_code = kExitOk;
  std::string summary;
};

/// Runs any scenario kind and writes its CSV, SVG and JSON manifest under
/// `out_dir`. Partial results are flushed before a failure is reported.
RunOutcome run_scenario(const Scenario& sc, const std::filesystem::path& out_dir, std::size_t jobs = 1);

}  // namespace smoothlab::harness
