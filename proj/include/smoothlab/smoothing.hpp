#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "smoothlab/classifiers.hpp"
#include "smoothlab/noise_models.hpp"

namespace smoothlab {

enum class EvalMode { Exact, MonteCarlo };

std::string_view to_string(EvalMode m);
EvalMode parse_eval_mode(std::string_view s);

/// Augmentation scale alpha and smoothing scale beta share one noise family.
struct SmoothingConfig {
  NoiseFamily family = NoiseFamily::GaussianIso;
  double alpha = 0.0;
  double beta = 0.0;
  EvalMode mode = EvalMode::Exact;
  std::size_t mc_samples = 1000;
  std::uint64_t seed = 0;

  void validate() const;
  std::optional<NoiseModel> alpha_model(std::size_t dim) const;
  std::optional<NoiseModel> beta_model(std::size_t dim) const;
};

struct VoteResult {
  double s = 0.0;
  int label = 0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n = 0;
  EvalMode mode = EvalMode::Exact;
};

/// Two-sided Clopper–Pearson interval for k successes in n trials.
std::pair<double, double> clopper_pearson(std::size_t k, std::size_t n, double confidence = 0.99);

/// Vote probability P[f(x + V) = 1] and its thresholded label.
VoteResult smooth_hard(const HardClassifier& f, const std::optional<NoiseModel>& noise, PointView x,
                       const SmoothingConfig& cfg);

/// ψ applied to a convolved conditional.
HardClassifier threshold(const SoftConditional& soft, const SmoothingConfig& cfg);

/// The smoothed classifier x ↦ ψ((f ∗ p)(x)).
HardClassifier smooth(const HardClassifier& f, const std::optional<NoiseModel>& noise, const SmoothingConfig& cfg);

/// Smooth_β(ψ(h ∗ p_α)).
HardClassifier two_stage(const Conditional& h, const SmoothingConfig& cfg);

struct Certificate {
  double radius = 0.0;
  bool abstain = false;
  bool capped = false;
};

/// Vote probabilities at 1 are treated as this value when certifying.
inline constexpr double kMaxCertifiedVote = 1.0 - 0x1p-40;

Certificate certified_radius(double s, double beta, NoiseFamily family = NoiseFamily::GaussianIso);

struct ShrinkageReport {
  std::vector<double> radius;
  std::vector<double> alpha_radius;
  std::vector<double> alpha_beta_radius;
  std::vector<bool> vanished_alpha;
  std::vector<bool> vanished_beta;
  double tau = 0.0;
  bool approximate = false;
};

/// Radius of {x : (0.5 + tau)·Φ(r, x) ≥ 0.5}; 0 when the level cannot be met.
double alpha_shrink_radius(const std::optional<NoiseModel>& alpha_model, double r, double tau);

ShrinkageReport alpha_shrinkage(const BallUnionConditional& c, const std::optional<NoiseModel>& alpha_model);
ShrinkageReport beta_shrinkage(ShrinkageReport report, const std::optional<NoiseModel>& beta_model);

/// Gap larger than the noise scale: the analytic regime for ball unions.
bool proof_regime(double zeta, const std::optional<NoiseModel>& noise);

/// Gap large enough that balls of a union do not interact through the noise,
/// so thresholded fields are exactly unions of concentric balls.
bool noninteracting(double zeta, const std::optional<NoiseModel>& noise, std::size_t count);

/// Radii of the thresholded field Σ_k weight·Φ(r_k, x − c_k) ≥ 0.5 around each
/// center, found by bisection along a ray using the full field.
std::vector<double> level_radii(std::span<const Ball> balls, double weight, const NoiseModel& noise);

}  // namespace smoothlab
