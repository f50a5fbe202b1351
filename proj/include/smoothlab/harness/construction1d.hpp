#pragma once

#include <optional>
#include <string>
#include <vector>

#include "smoothlab/harness/output.hpp"

namespace smoothlab::harness {

struct ConstructionCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Outcome of the one-dimensional three-interval construction. Scales
/// alpha and beta are interval widths; noise is uniform on [−θ/2, θ/2].
struct Construction1DVerdict {
  double omega = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double widened_gap = 0.0;
  std::vector<ConstructionCheck> checks;

  double risk_unaugmented = 0.0;  ///< R(Smooth_β(ψ(h)))
  double risk_augmented = 0.0;    ///< R(Smooth_β(ψ(h ∗ p_α)))
  double widened_risk_unaugmented = 0.0;
  double widened_risk_augmented = 0.0;

  bool passed() const;
  std::vector<std::string> failed() const;
};

/// Checks the explicit parameter constraints and, through the exact 1D
/// engine, the prediction and risk claims of the construction. The widened
/// variant keeps the outer endpoints and opens the middle gap to
/// `widened_gap` (default: alpha).
Construction1DVerdict verify_1d_construction(double omega, double alpha, double beta,
                                             std::optional<double> widened_gap = std::nullopt);

CsvTable construction_csv(const Construction1DVerdict& v);

}  // namespace smoothlab::harness
