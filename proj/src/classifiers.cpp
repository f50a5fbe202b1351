#include "smoothlab/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "smoothlab/errors.hpp"
#include "smoothlab/rng.hpp"

namespace smoothlab {

int psi(double value) { return value >= 0.5 ? 1 : 0; }

BallUnionConditional::BallUnionConditional(std::vector<Ball> balls, double tau)
    : balls_(std::move(balls)), tau_(tau), dim_(0) {
  detail::require(tau >= 0.0 && tau < 0.5, "BallUnionConditional: tau must lie in [0, 0.5)");
  detail::require(!balls_.empty(), "BallUnionConditional: need at least one ball");
  dim_ = balls_.front().dim();
  detail::require(dim_ >= 1, "BallUnionConditional: empty center");
  for (const auto& b : balls_) {
    detail::require(b.dim() == dim_, "BallUnionConditional: mixed dimensions");
    detail::require(std::isfinite(b.radius) && b.radius > 0.0, "BallUnionConditional: radii must be positive");
  }
  detail::require(pairwise_disjoint(balls_, kDisjointSlack), "BallUnionConditional: balls must be pairwise disjoint");
}

double BallUnionConditional::operator()(PointView x) const {
  detail::require(x.size() == dim_, "BallUnionConditional: dimension mismatch");
  for (const auto& b : balls_) {
    if (squared_distance(x, b.center) <= b.radius * b.radius) return level();
  }
  return 0.0;
}

Piecewise1DConditional::Piecewise1DConditional(std::vector<double> breaks, std::vector<double> values) {
  detail::require(!values.empty(), "Piecewise1DConditional: need at least one piece");
  detail::require(breaks.size() == values.size() + 1, "Piecewise1DConditional: need one more breakpoint than values");
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    detail::require(breaks[i] < breaks[i + 1], "Piecewise1DConditional: breakpoints must be strictly increasing");
  }
  for (double v : values) {
    detail::require(v >= 0.0 && v <= 1.0, "Piecewise1DConditional: values must lie in [0, 1]");
  }
  f_.breaks = std::move(breaks);
  f_.values = std::move(values);
}

double Piecewise1DConditional::operator()(PointView x) const {
  detail::require(x.size() == 1, "Piecewise1DConditional: dimension mismatch");
  return f_(x[0]);
}

double evaluate(const Conditional& h, PointView x) {
  return std::visit(
      [&](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, GenericConditional>) {
          detail::require(x.size() == c.dim, "conditional: dimension mismatch");
          return c.fn(x);
        } else {
          return c(x);
        }
      },
      h);
}

std::size_t dimension(const Conditional& h) {
  return std::visit(
      [](const auto& c) -> std::size_t {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, GenericConditional>) {
          return c.dim;
        } else {
          return c.dim();
        }
      },
      h);
}

Piecewise1DConditional to_piecewise(const BallUnionConditional& c) {
  detail::require(c.dim() == 1, "to_piecewise: ball union must be one-dimensional");
  std::vector<Interval> ivs;
  for (const auto& b : c.balls()) ivs.push_back({b.center[0] - b.radius, b.center[0] + b.radius});
  std::sort(ivs.begin(), ivs.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<double> breaks;
  std::vector<double> values;
  for (const auto& iv : ivs) {
    if (!breaks.empty()) values.push_back(0.0);
    breaks.push_back(iv.lo);
    values.push_back(c.level());
    breaks.push_back(iv.hi);
  }
  return Piecewise1DConditional(std::move(breaks), std::move(values));
}

namespace {

std::vector<double> pairwise_gaps(const BallUnionConditional& c) {
  const auto& balls = c.balls();
  if (balls.size() < 2) throw InvalidArgument("interference distance is undefined for fewer than two balls");
  std::vector<double> gaps;
  for (std::size_t i = 0; i < balls.size(); ++i) {
    for (std::size_t j = i + 1; j < balls.size(); ++j) {
      gaps.push_back(distance(balls[i].center, balls[j].center) - balls[i].radius - balls[j].radius);
    }
  }
  return gaps;
}

}  // namespace

double lower_interference_distance(const BallUnionConditional& c) {
  const auto gaps = pairwise_gaps(c);
  return *std::min_element(gaps.begin(), gaps.end());
}

double upper_interference_distance(const BallUnionConditional& c) {
  const auto gaps = pairwise_gaps(c);
  return *std::max_element(gaps.begin(), gaps.end());
}

SoftConditional soft_convolve(const Conditional& h, const std::optional<NoiseModel>& noise,
                              const SoftOptions& options) {
  SoftConditional s;
  s.dim_ = dimension(h);
  s.noise_ = noise;
  s.options_ = options;
  if (noise) {
    detail::require(noise->dim() == s.dim_, "soft_convolve: noise dimension mismatch");
    s.noise_reach_ = reach(*noise);
  }

  if (const auto* balls = std::get_if<BallUnionConditional>(&h)) {
    s.balls_ = *balls;
    if (s.dim_ == 1) s.pieces_ = to_piecewise(*balls);
    if (noise && options.tabulate && s.dim_ >= 2) {
      std::map<double, std::shared_ptr<const RadialProfile>> cache;
      for (const auto& b : balls->balls()) {
        auto& p = cache[b.radius];
        if (!p) p = std::make_shared<const RadialProfile>(*noise, b.radius);
        s.profiles_.push_back(p);
      }
      s.exact_ = false;
    }
  } else if (const auto* pieces = std::get_if<Piecewise1DConditional>(&h)) {
    s.pieces_ = *pieces;
  } else {
    const auto& g = std::get<GenericConditional>(h);
    s.generic_ = g.fn;
    s.exact_ = !noise.has_value();
  }
  if (noise && s.pieces_) {
    s.conv1d_ = std::make_shared<const Convolved1D>(s.pieces_->pieces(), *noise);
  }
  return s;
}

double SoftConditional::ball_reach(std::size_t j) const {
  return balls_->balls().at(j).radius + noise_reach_;
}

double SoftConditional::operator()(PointView x) const {
  detail::require(x.size() == dim_, "soft conditional: dimension mismatch");
  if (!noise_) {
    if (balls_) return (*balls_)(x);
    if (pieces_) return (*pieces_)(x);
    return generic_(x);
  }
  if (conv1d_) return (*conv1d_)(x[0]);
  if (balls_) {
    const auto& balls = balls_->balls();
    double sum = 0.0;
    for (std::size_t j = 0; j < balls.size(); ++j) {
      const double reach_j = balls[j].radius + noise_reach_;
      const double d2 = squared_distance(x, balls[j].center);
      if (d2 >= reach_j * reach_j) continue;
      const double t = std::sqrt(d2);
      sum += profiles_.empty() ? shifted_cdf_radial(*noise_, balls[j].radius, t) : (*profiles_[j])(t);
    }
    return std::min(1.0, balls_->level() * sum);
  }
  Rng rng(point_seed(options_.seed, x));
  Point z(dim_);
  Point y(dim_);
  double sum = 0.0;
  for (std::size_t i = 0; i < options_.mc_samples; ++i) {
    draw(*noise_, rng, z);
    for (std::size_t k = 0; k < dim_; ++k) y[k] = x[k] - z[k];
    sum += generic_(y);
  }
  return sum / static_cast<double>(options_.mc_samples);
}

HardClassifier::HardClassifier(HardFn eval, std::size_t dim, HardStructure structure,
                               std::optional<std::vector<Ball>> support)
    : eval_(std::move(eval)), dim_(dim), structure_(std::move(structure)), support_(std::move(support)) {
  detail::require(dim_ >= 1, "HardClassifier: dimension must be positive");
}

HardClassifier HardClassifier::constant(int label, std::size_t dim) {
  detail::require(label == 0 || label == 1, "HardClassifier: labels are 0 or 1");
  std::optional<std::vector<Ball>> support;
  if (label == 0) support = std::vector<Ball>{};
  return HardClassifier([label](PointView) { return label; }, dim, ConstantLabel{label}, std::move(support));
}

HardClassifier HardClassifier::ball_set(std::vector<Ball> balls, std::size_t dim) {
  std::erase_if(balls, [](const Ball& b) { return !(b.radius > 0.0); });
  for (const auto& b : balls) detail::require(b.dim() == dim, "HardClassifier: ball dimension mismatch");
  for (std::size_t i = 0; i < balls.size(); ++i) {
    for (std::size_t j = i + 1; j < balls.size(); ++j) {
      const double gap = distance(balls[i].center, balls[j].center) - balls[i].radius - balls[j].radius;
      detail::require(gap >= -1e-12, "HardClassifier: decision balls overlap");
    }
  }
  auto eval = [balls](PointView x) {
    for (const auto& b : balls) {
      if (squared_distance(x, b.center) <= b.radius * b.radius) return 1;
    }
    return 0;
  };
  return HardClassifier(eval, dim, BallSetRegion{balls}, balls);
}

HardClassifier HardClassifier::intervals(IntervalSet set) {
  std::vector<Ball> support;
  for (const auto& iv : set.parts()) {
    support.push_back(Ball{{0.5 * (iv.lo + iv.hi)}, 0.5 * (iv.hi - iv.lo)});
  }
  auto eval = [set](PointView x) { return set.contains(x[0]) ? 1 : 0; };
  return HardClassifier(eval, 1, set, std::move(support));
}

bool HardClassifier::may_be_positive(PointView x) const {
  if (!support_) return true;
  for (const auto& b : *support_) {
    if (squared_distance(x, b.center) <= b.radius * b.radius) return true;
  }
  return false;
}

HardClassifier psi_of(const Conditional& h) {
  if (const auto* balls = std::get_if<BallUnionConditional>(&h)) {
    if (balls->dim() == 1) return HardClassifier::intervals(superlevel_set(to_piecewise(*balls).pieces(), 0.5));
    return HardClassifier::ball_set(balls->balls(), balls->dim());
  }
  if (const auto* pieces = std::get_if<Piecewise1DConditional>(&h)) {
    return HardClassifier::intervals(superlevel_set(pieces->pieces(), 0.5));
  }
  const auto& g = std::get<GenericConditional>(h);
  return HardClassifier([fn = g.fn](PointView x) { return psi(fn(x)); }, g.dim);
}

PerturbedClassifier::PerturbedClassifier(ConditionalFn base, std::size_t dim, double eta, std::vector<Bump> bumps,
                                         double offset)
    : base_(std::move(base)), dim_(dim), eta_(eta), bumps_(std::move(bumps)), offset_(offset) {
  detail::require(eta >= 0.0 && eta < 0.5, "PerturbedClassifier: eta must lie in [0, 0.5)");
  for (const auto& b : bumps_) {
    detail::require(b.center.size() == dim_, "PerturbedClassifier: bump dimension mismatch");
    detail::require(b.width > 0.0, "PerturbedClassifier: bump width must be positive");
    detail::require(b.weight >= -1.0 && b.weight <= 1.0, "PerturbedClassifier: bump weight must lie in [-1, 1]");
  }
}

PerturbedClassifier PerturbedClassifier::seeded(ConditionalFn base, std::size_t dim, double eta, std::uint64_t seed,
                                                std::span<const Ball> anchors, double margin,
                                                std::size_t bumps_per_anchor) {
  Rng rng(seed);
  std::vector<Bump> bumps;
  for (const auto& a : anchors) {
    detail::require(a.dim() == dim, "PerturbedClassifier: anchor dimension mismatch");
    for (std::size_t k = 0; k < bumps_per_anchor; ++k) {
      Bump b;
      b.center = a.center;
      for (double& c : b.center) c += 0.25 * a.radius * (2.0 * rng.uniform() - 1.0) / std::sqrt(double(dim));
      b.width = 1.25 * a.radius + margin * (1.0 + rng.uniform());
      b.weight = 2.0 * rng.uniform() - 1.0;
      bumps.push_back(std::move(b));
    }
  }
  return PerturbedClassifier(std::move(base), dim, eta, std::move(bumps));
}

PerturbedClassifier PerturbedClassifier::constant_shift(ConditionalFn base, std::size_t dim, double eta) {
  return PerturbedClassifier(std::move(base), dim, eta, {}, 1.0);
}

double PerturbedClassifier::perturbation(PointView x) const {
  detail::require(x.size() == dim_, "PerturbedClassifier: dimension mismatch");
  double s = offset_;
  for (const auto& b : bumps_) {
    const double u = squared_distance(x, b.center) / (b.width * b.width);
    if (u < 1.0) s += b.weight * (1.0 - u) * (1.0 - u);
  }
  return eta_ * std::clamp(s, -1.0, 1.0);
}

double PerturbedClassifier::operator()(PointView x) const {
  return std::clamp(base_(x) + perturbation(x), 0.0, 1.0);
}

}  // namespace smoothlab
