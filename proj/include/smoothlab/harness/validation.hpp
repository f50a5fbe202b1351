#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "smoothlab/bounds.hpp"
#include "smoothlab/harness/output.hpp"
#include "smoothlab/harness/scenario.hpp"

namespace smoothlab::harness {

/// Number of standard errors a Monte-Carlo estimate may exceed a bound by.
inline constexpr double kBoundSigmas = 4.0;
inline constexpr double kSandwichSigmas = 3.0;

struct BoundRow {
  std::size_t instance = 0;
  NoiseFamily family = NoiseFamily::GaussianIso;
  double zeta = 0.0;         ///< separation requested from the sampler
  double zeta_actual = 0.0;  ///< realised lower interference distance (inf for one ball)
  double radius = 0.0;
  std::size_t spheres = 0;
  double tau_h = 0.0;
  double tau = 0.0;  ///< grid value attaining the reported bound
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 0.0;
  double delta_se = 0.0;
  double bound = 0.0;
  bool bound_exact = true;
  std::uint64_t seed = 0;

  double margin() const { return bound - delta; }
  bool violation() const { return delta - kBoundSigmas * delta_se > bound; }
};

struct InexactRow {
  std::size_t instance = 0;
  NoiseFamily family = NoiseFamily::UniformBall;
  double zeta = 0.0;
  double radius = 0.0;
  std::size_t spheres = 0;
  double tau_h = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double eta = 0.0;
  double delta = 0.0;  ///< Δ of the perturbed pipeline against ψ(h)
  double delta_se = 0.0;
  InexactBounds bounds;
  GeneralBound general;
  std::uint64_t seed = 0;

  bool sandwich_ok() const;
  bool general_ok() const;
};

struct ValidationFailure {
  std::size_t instance = 0;
  std::string message;
};

template <typename Row>
struct ValidationResult {
  std::vector<Row> rows;  ///< successful instances in instance order
  std::vector<ValidationFailure> failures;
  std::size_t violations = 0;
};

using BoundValidationResult = ValidationResult<BoundRow>;
using InexactValidationResult = ValidationResult<InexactRow>;

/// Random ball-union instances across separation regimes; compares the
/// Monte-Carlo excess risk with the partition bound minimised over the τ grid.
BoundValidationResult run_bound_validation(const Scenario& sc, std::size_t jobs = 1);

/// Seeded η-perturbations of the exact augmented conditional in the
/// well-separated regime; checks the two-sided risk bounds and the general bound.
InexactValidationResult run_inexact_validation(const Scenario& sc, std::size_t jobs = 1);

CsvTable bound_csv(const Scenario& sc, const BoundValidationResult& res);
CsvTable inexact_csv(const Scenario& sc, const InexactValidationResult& res);
std::string bound_svg(const BoundValidationResult& res);
std::string inexact_svg(const InexactValidationResult& res);

}  // namespace smoothlab::harness
