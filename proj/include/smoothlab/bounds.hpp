#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "smoothlab/classifiers.hpp"
#include "smoothlab/risk.hpp"

namespace smoothlab {

enum class PartitionSign { Positive, Negative };

struct PartitionEntry {
  PartitionSign sign = PartitionSign::Positive;
  Point center;
  double inradius = 0.0;
};

/// Inradius balls B(x̂^k, ω^k) of the margin-τ parts of each partition.
/// The caller certifies that each ball lies inside its partition.
struct PartitionSummary {
  std::vector<PartitionEntry> parts;
  double tau = 0.0;
  std::size_t dim = 1;
};

/// Positive partitions of a ball union, using each ball as its own inradius
/// ball. Requires tau ≤ c.tau() so the margin set is the whole ball.
PartitionSummary positive_partitions(const BallUnionConditional& c, double tau);

struct BoundReport {
  double bound = 1.0;
  std::vector<double> r_alpha;
  std::vector<double> r_alpha_beta;
  std::vector<bool> clipped;
  bool exact = true;
};

/// 1 − Σ_k p_X(B(x̂^k, (ω^k − r^k_{α,β})₊)) with r^k_α = √Ψ_α⁻¹(0.5/(0.5 ± τ))
/// and r^k_{α,β} = r^k_α + √Ψ_β⁻¹(0.5). Partitions whose level exceeds 1
/// contribute nothing.
BoundReport main_upper_bound(const PartitionSummary& parts, const DataMeasure& px,
                             const std::optional<NoiseModel>& alpha_model,
                             const std::optional<NoiseModel>& beta_model, std::uint64_t seed = 0);

struct EtaRadii {
  std::vector<double> plus;   // A_{α,r}((0.5 + η)/(0.5 + τ))
  std::vector<double> minus;  // A_{α,r}((0.5 − η)/(0.5 + τ))
  std::vector<bool> vanished_plus;
  std::vector<bool> vanished_minus;
};

EtaRadii eta_shrinkage_radii(const BallUnionConditional& c, const std::optional<NoiseModel>& alpha_model, double eta);

enum class InexactCase { A, B, Mixed };

struct InexactBounds {
  double lower = 0.0;
  double upper = 0.0;
  InexactCase which = InexactCase::A;
  std::vector<double> inner_radius;    // smoothed radius of the +η ball
  std::vector<double> outer_radius;    // smoothed radius of the −η ball
  bool exact = true;
};

/// Bounds on Δ(g, h) for any g within η of h ∗ p_α, selected per ball by
/// comparing the smoothed −η radius with the ball radius.
InexactBounds inexact_risk_bounds(const BallUnionConditional& c, const DataMeasure& px,
                                  const std::optional<NoiseModel>& alpha_model,
                                  const std::optional<NoiseModel>& beta_model, double eta);

struct GeneralBound {
  double bound = 0.0;
  double disagreement = 0.0;
  double std_error = 0.0;
};

inline constexpr double kValueEqualityTol = 1e-12;

/// delta_h + p_X((h ∗ p_α)(X) ≠ g(X)), the mass estimated from n draws.
GeneralBound general_g_bound(const Conditional& h, const PerturbedClassifier& g, const DataMeasure& px,
                             const std::optional<NoiseModel>& alpha_model, double delta_h, std::size_t n,
                             std::uint64_t seed);

}  // namespace smoothlab
