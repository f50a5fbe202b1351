#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "smoothlab/exact1d.hpp"
#include "smoothlab/geometry.hpp"
#include "smoothlab/noise_models.hpp"

namespace smoothlab {

using PointView = std::span<const double>;
using ConditionalFn = std::function<double(PointView)>;

/// Hard threshold: 1 iff value ≥ 0.5.
int psi(double value);

inline constexpr double kDisjointSlack = 1e-9;

/// h(x) = 0.5 + tau on a union of pairwise disjoint closed balls, 0 elsewhere.
class BallUnionConditional {
 public:
  BallUnionConditional(std::vector<Ball> balls, double tau);

  const std::vector<Ball>& balls() const { return balls_; }
  double tau() const { return tau_; }
  double level() const { return 0.5 + tau_; }
  std::size_t dim() const { return dim_; }

  double operator()(PointView x) const;

 private:
  std::vector<Ball> balls_;
  double tau_;
  std::size_t dim_;
};

/// Piecewise-constant conditional on [breaks.front(), breaks.back()], zero outside.
class Piecewise1DConditional {
 public:
  Piecewise1DConditional(std::vector<double> breaks, std::vector<double> values);

  const PiecewiseConstant& pieces() const { return f_; }
  double domain_lo() const { return f_.breaks.front(); }
  double domain_hi() const { return f_.breaks.back(); }
  std::size_t dim() const { return 1; }

  double operator()(double x) const { return f_(x); }
  double operator()(PointView x) const;

 private:
  PiecewiseConstant f_;
};

/// Any conditional given only as a function.
struct GenericConditional {
  ConditionalFn fn;
  std::size_t dim = 1;
};

using Conditional = std::variant<BallUnionConditional, Piecewise1DConditional, GenericConditional>;

double evaluate(const Conditional& h, PointView x);
std::size_t dimension(const Conditional& h);

/// 1D ball unions rewritten as piecewise-constant conditionals.
Piecewise1DConditional to_piecewise(const BallUnionConditional& c);

/// Smallest and largest gap between two balls of the union.
double lower_interference_distance(const BallUnionConditional& c);
double upper_interference_distance(const BallUnionConditional& c);

struct SoftOptions {
  bool tabulate = false;           // radial lookup tables for ball unions
  std::size_t mc_samples = 4096;   // only for generic conditionals
  std::uint64_t seed = 0;
};

/// The noise-convolved conditional h ∗ p. An empty noise model is the identity.
class SoftConditional {
 public:
  double operator()(PointView x) const;
  std::size_t dim() const { return dim_; }
  bool exact() const { return exact_; }
  const std::optional<NoiseModel>& noise() const { return noise_; }

  /// Set only when the source was a ball union.
  const BallUnionConditional* ball_source() const { return balls_ ? &*balls_ : nullptr; }
  /// Set only for one-dimensional piecewise sources (or 1D ball unions).
  const Piecewise1DConditional* piecewise_source() const { return pieces_ ? &*pieces_ : nullptr; }
  const Convolved1D* convolved_1d() const { return conv1d_.get(); }

  /// Distance from ball j beyond which its contribution is below 1e-16.
  double ball_reach(std::size_t j) const;

 private:
  friend SoftConditional soft_convolve(const Conditional&, const std::optional<NoiseModel>&, const SoftOptions&);

  std::size_t dim_ = 1;
  bool exact_ = true;
  std::optional<NoiseModel> noise_;
  std::optional<BallUnionConditional> balls_;
  std::optional<Piecewise1DConditional> pieces_;
  std::shared_ptr<const Convolved1D> conv1d_;
  std::vector<std::shared_ptr<const RadialProfile>> profiles_;
  double noise_reach_ = 0.0;
  ConditionalFn generic_;
  SoftOptions options_;
};

SoftConditional soft_convolve(const Conditional& h, const std::optional<NoiseModel>& noise,
                              const SoftOptions& options = {});

/// f ≡ label.
struct ConstantLabel {
  int label = 0;
};
/// f = 1 on a union of pairwise disjoint closed balls.
struct BallSetRegion {
  std::vector<Ball> balls;
};
using HardStructure = std::variant<std::monostate, ConstantLabel, BallSetRegion, IntervalSet>;

using HardFn = std::function<int(PointView)>;

/// Deterministic x ↦ {0, 1}. When the decision region is known in closed
/// form it is carried in `structure()`; `support()` optionally lists balls
/// outside of which the classifier is known to output 0.
class HardClassifier {
 public:
  HardClassifier(HardFn eval, std::size_t dim, HardStructure structure = {},
                 std::optional<std::vector<Ball>> support = std::nullopt);

  static HardClassifier constant(int label, std::size_t dim);
  static HardClassifier ball_set(std::vector<Ball> balls, std::size_t dim);
  static HardClassifier intervals(IntervalSet set);

  int operator()(PointView x) const { return eval_(x); }
  std::size_t dim() const { return dim_; }
  const HardStructure& structure() const { return structure_; }
  const std::optional<std::vector<Ball>>& support() const { return support_; }
  /// False when x lies outside every support ball, so f(x) = 0.
  bool may_be_positive(PointView x) const;

 private:
  HardFn eval_;
  std::size_t dim_;
  HardStructure structure_;
  std::optional<std::vector<Ball>> support_;
};

/// ψ(h) for a conditional with no noise applied.
HardClassifier psi_of(const Conditional& h);

/// Compactly supported bump (1 − ‖x − m‖²/w²)²₊ scaled by `weight` in [−1, 1].
struct Bump {
  Point center;
  double width = 1.0;
  double weight = 0.0;
};

/// g = clip(base + η·clamp(offset + Σ bumps, −1, 1), 0, 1), so |g − base| ≤ η.
class PerturbedClassifier {
 public:
  PerturbedClassifier(ConditionalFn base, std::size_t dim, double eta, std::vector<Bump> bumps,
                      double offset = 0.0);

  /// Bumps centred near the anchor balls with widths exceeding the ball radius by up to `margin`.
  static PerturbedClassifier seeded(ConditionalFn base, std::size_t dim, double eta, std::uint64_t seed,
                                    std::span<const Ball> anchors, double margin, std::size_t bumps_per_anchor = 2);
  /// base + η everywhere (up to clipping).
  static PerturbedClassifier constant_shift(ConditionalFn base, std::size_t dim, double eta);

  double perturbation(PointView x) const;
  double base(PointView x) const { return base_(x); }
  double operator()(PointView x) const;

  double eta() const { return eta_; }
  std::size_t dim() const { return dim_; }
  double offset() const { return offset_; }
  const std::vector<Bump>& bumps() const { return bumps_; }

 private:
  ConditionalFn base_;
  std::size_t dim_;
  double eta_;
  std::vector<Bump> bumps_;
  double offset_;
};

}  // namespace smoothlab
