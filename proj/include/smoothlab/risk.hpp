#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "smoothlab/classifiers.hpp"
#include "smoothlab/smoothing.hpp"

namespace smoothlab {

/// Axis-aligned box [lo, hi].
struct Box {
  Point lo;
  Point hi;

  std::size_t dim() const { return lo.size(); }
  double volume() const;
  bool contains(PointView x) const;
};

using Region = std::variant<Box, Ball>;

double region_volume(const Region& r);

struct MeasureComponent {
  double weight = 1.0;
  Region region;
};

enum class MeasureKind { UniformBox, UniformOnRegions, Mixture };

/// Data marginal: a finite mixture of uniform distributions on boxes and balls.
class DataMeasure {
 public:
  static DataMeasure uniform_box(Point lo, Point hi);
  /// Uniform on a union of disjoint regions (weights proportional to volume).
  static DataMeasure uniform_on_regions(std::vector<Region> regions);
  static DataMeasure mixture(std::vector<MeasureComponent> components);

  MeasureKind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  const std::vector<MeasureComponent>& components() const { return components_; }

  void draw(Rng& rng, std::span<double> out) const;
  double density(PointView x) const;

 private:
  DataMeasure(MeasureKind kind, std::vector<MeasureComponent> components);

  MeasureKind kind_;
  std::size_t dim_ = 1;
  std::vector<MeasureComponent> components_;
  std::vector<double> cumulative_;
};

struct MassReport {
  double value = 0.0;
  bool exact = true;
};

inline constexpr std::size_t kRegionMassSamples = 200000;

/// p_X of a union of pairwise disjoint closed balls. Exact whenever each
/// ball lies inside, outside or around each box component (any ball component
/// is exact through lens volumes); otherwise estimated and flagged.
MassReport region_mass(const DataMeasure& px, std::span<const Ball> balls, std::uint64_t seed = 0,
                       std::size_t mc_samples = kRegionMassSamples);
MassReport region_mass(const DataMeasure& px, const IntervalSet& set);
MassReport region_mass(const DataMeasure& px, const Box& box);

struct RiskReport {
  double value = 0.0;
  EvalMode mode = EvalMode::Exact;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  double std_error = 0.0;
};

struct RiskOptions {
  EvalMode mode = EvalMode::Exact;
  std::size_t mc_samples = 20000;
  std::uint64_t seed = 0;
};

/// Two-sided normal quantile used for risk intervals.
double risk_z(double confidence = 0.99);

/// Expected loss f(1 − h) + (1 − f)h at one point.
double pointwise_loss(int f, double h);

RiskReport risk(const HardClassifier& f, const Conditional& h, const DataMeasure& px, const RiskOptions& opt = {});

/// R(f1) − R(f2) from one shared sample of X.
RiskReport paired_risk_difference(const HardClassifier& f1, const HardClassifier& f2, const Conditional& h,
                                  const DataMeasure& px, std::size_t n, std::uint64_t seed);

/// Δ = R(Smooth_β(ψ(h ∗ p_α))) − R(ψ(h)). In Monte-Carlo mode both risks use
/// the same `mc_points` draws of X and cfg.mc_samples votes per point.
RiskReport excess_risk(const Conditional& h, const DataMeasure& px, const SmoothingConfig& cfg,
                       std::size_t mc_points = 20000);

struct ClosedFormExcess {
  double value = 0.0;
  bool approximate = false;
  double mass_union = 0.0;
  double mass_shrunk = 0.0;
  ShrinkageReport shrinkage;
};

/// (0.5 + τ)p(𝓘) − 2τ p(𝓘_{α,β}) − (0.5 − τ)p(𝓘) with shrinkage-pipeline radii.
ClosedFormExcess closed_form_excess(const BallUnionConditional& c, const DataMeasure& px,
                                    const std::optional<NoiseModel>& alpha_model,
                                    const std::optional<NoiseModel>& beta_model);

struct LabeledPoint {
  Point x;
  int y = 0;
};

std::vector<LabeledPoint> sample_labeled(const Conditional& h, const DataMeasure& px, std::size_t n,
                                         std::uint64_t seed);

/// Fraction of test points where the classifier disagrees with the label.
double empirical_delta(const HardClassifier& pipeline, std::span<const LabeledPoint> test_set);

}  // namespace smoothlab
