#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "smoothlab/harness/output.hpp"
#include "smoothlab/harness/scenario.hpp"

namespace smoothlab::harness {

/// Aggregate over the sampled configurations of one (ζ, α, β) grid cell.
/// `delta` is Δ_{α,β}; `diff` is Δ_{α,β} − Δ_{0,β} from the same draws.
struct SweepCell {
  std::size_t zeta_index = 0;
  std::size_t alpha_index = 0;
  std::size_t beta_index = 0;
  double zeta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  EvalMode mode = EvalMode::MonteCarlo;
  std::size_t configs = 0;
  bool ok = false;
  double delta = 0.0;
  double delta_se = 0.0;
  double diff = 0.0;
  double diff_se = 0.0;
  double diff_upper = 0.0;  ///< simultaneous upper confidence edge over the α grid
};

struct SweepFlag {
  std::size_t zeta_index = 0;
  std::size_t beta_index = 0;
  bool ok = false;
  bool dashed = false;
  double min_diff_upper = 0.0;
};

struct SweepFailure {
  std::size_t zeta_index = 0;
  std::size_t config = 0;
  std::size_t beta_index = 0;
  std::string message;
};

struct SweepResult {
  std::vector<SweepCell> cells;  ///< ordered by (ζ, β, α)
  std::vector<SweepFlag> flags;  ///< ordered by (ζ, β)
  std::vector<SweepFailure> failures;
  std::vector<std::size_t> sphere_counts;  ///< balls per sampled configuration, ordered by (ζ, config)

  const SweepFlag& flag(std::size_t zeta_index, std::size_t beta_index) const;
  const SweepCell& cell(std::size_t zeta_index, std::size_t alpha_index, std::size_t beta_index) const;
};

/// Confidence level shared by all intervals the harness reports.
inline constexpr double kHarnessConfidence = 0.99;

SweepResult run_sweep(const Scenario& sc, std::size_t jobs = 1);

CsvTable sweep_csv(const Scenario& sc, const SweepResult& res);
std::string sweep_svg(const Scenario& sc, const SweepResult& res);
nlohmann::json sweep_manifest(const Scenario& sc, const SweepResult& res);

}  // namespace smoothlab::harness
