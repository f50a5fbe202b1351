#include "smoothlab/risk.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include <boost/math/distributions/normal.hpp>

#include "smoothlab/errors.hpp"
#include "smoothlab/rng.hpp"

namespace smoothlab {

double Box::volume() const {
  double v = 1.0;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

bool Box::contains(PointView x) const {
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  }
  return true;
}

double region_volume(const Region& r) {
  if (const auto* b = std::get_if<Box>(&r)) return b->volume();
  const auto& ball = std::get<Ball>(r);
  return ball_volume(ball.dim(), ball.radius);
}

namespace {

std::size_t region_dim(const Region& r) {
  return std::visit([](const auto& x) { return x.dim(); }, r);
}

void validate_region(const Region& r) {
  if (const auto* b = std::get_if<Box>(&r)) {
    detail::require(b->lo.size() == b->hi.size() && !b->lo.empty(), "DataMeasure: malformed box");
    for (std::size_t i = 0; i < b->lo.size(); ++i) {
      detail::require(b->lo[i] < b->hi[i], "DataMeasure: box must be nondegenerate");
    }
  } else {
    const auto& ball = std::get<Ball>(r);
    detail::require(!ball.center.empty() && ball.radius > 0.0, "DataMeasure: malformed ball");
  }
}

bool region_contains(const Region& r, PointView x) {
  if (const auto* b = std::get_if<Box>(&r)) return b->contains(x);
  const auto& ball = std::get<Ball>(r);
  return squared_distance(x, ball.center) <= ball.radius * ball.radius;
}

void draw_region(const Region& r, Rng& rng, std::span<double> out) {
  if (const auto* b = std::get_if<Box>(&r)) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = b->lo[i] + (b->hi[i] - b->lo[i]) * rng.uniform();
    return;
  }
  const auto& ball = std::get<Ball>(r);
  draw(NoiseModel(NoiseFamily::UniformBall, ball.radius, ball.dim()), rng, out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += ball.center[i];
}

/// Interval [lo, hi] covered by a 1D region.
Interval as_interval(const Region& r) {
  if (const auto* b = std::get_if<Box>(&r)) return {b->lo[0], b->hi[0]};
  const auto& ball = std::get<Ball>(r);
  return {ball.center[0] - ball.radius, ball.center[0] + ball.radius};
}

enum class Relation { Inside, Outside, Covers, Partial };

Relation relate(const Box& box, const Ball& ball) {
  double out2 = 0.0;
  double far2 = 0.0;
  bool inside = true;
  for (std::size_t i = 0; i < box.dim(); ++i) {
    const double c = ball.center[i];
    if (c - ball.radius < box.lo[i] || c + ball.radius > box.hi[i]) inside = false;
    const double gap = c < box.lo[i] ? box.lo[i] - c : (c > box.hi[i] ? c - box.hi[i] : 0.0);
    out2 += gap * gap;
    const double far = std::max(c - box.lo[i], box.hi[i] - c);
    far2 += far * far;
  }
  const double r2 = ball.radius * ball.radius;
  if (inside) return Relation::Inside;
  if (out2 >= r2) return Relation::Outside;
  if (far2 <= r2) return Relation::Covers;
  return Relation::Partial;
}

/// Probability that a draw from the component lands in the ball, when closed form.
std::optional<double> exact_ball_mass(const Region& comp, const Ball& ball) {
  if (!(ball.radius > 0.0)) return 0.0;
  if (const auto* box = std::get_if<Box>(&comp)) {
    if (box->dim() == 1) {
      const Interval iv = as_interval(comp);
      const double lo = std::max(iv.lo, ball.center[0] - ball.radius);
      const double hi = std::min(iv.hi, ball.center[0] + ball.radius);
      return std::max(0.0, hi - lo) / (iv.hi - iv.lo);
    }
    switch (relate(*box, ball)) {
      case Relation::Inside:
        return ball_volume(ball.dim(), ball.radius) / box->volume();
      case Relation::Outside:
        return 0.0;
      case Relation::Covers:
        return 1.0;
      case Relation::Partial:
        return std::nullopt;
    }
  }
  const auto& cb = std::get<Ball>(comp);
  const double v = ball_intersection_volume(cb.dim(), cb.radius, ball.radius, distance(cb.center, ball.center));
  return std::clamp(v / ball_volume(cb.dim(), cb.radius), 0.0, 1.0);
}

/// Mass of B1 ∩ B2 under one component, when closed form.
std::optional<double> exact_lens_mass(const Region& comp, const Ball& b1, const Ball& b2) {
  if (!(b1.radius > 0.0) || !(b2.radius > 0.0)) return 0.0;
  const double d = distance(b1.center, b2.center);
  if (d >= b1.radius + b2.radius) return 0.0;
  if (d + b1.radius <= b2.radius) return exact_ball_mass(comp, b1);
  if (d + b2.radius <= b1.radius) return exact_ball_mass(comp, b2);
  if (const auto* box = std::get_if<Box>(&comp)) {
    if (box->dim() == 1) {
      const double lo = std::max({box->lo[0], b1.center[0] - b1.radius, b2.center[0] - b2.radius});
      const double hi = std::min({box->hi[0], b1.center[0] + b1.radius, b2.center[0] + b2.radius});
      return std::max(0.0, hi - lo) / box->volume();
    }
    if (relate(*box, b1) == Relation::Inside && relate(*box, b2) == Relation::Inside) {
      return ball_intersection_volume(b1.dim(), b1.radius, b2.radius, d) / box->volume();
    }
  }
  return std::nullopt;
}

void require_disjoint(std::span<const Ball> balls) {
  for (std::size_t i = 0; i < balls.size(); ++i) {
    for (std::size_t j = i + 1; j < balls.size(); ++j) {
      if (!(balls[i].radius > 0.0) || !(balls[j].radius > 0.0)) continue;
      const double gap = distance(balls[i].center, balls[j].center) - balls[i].radius - balls[j].radius;
      detail::require(gap >= -1e-12, "region_mass: regions overlap");
    }
  }
}

}  // namespace

DataMeasure::DataMeasure(MeasureKind kind, std::vector<MeasureComponent> components)
    : kind_(kind), components_(std::move(components)) {
  detail::require(!components_.empty(), "DataMeasure: need at least one component");
  dim_ = region_dim(components_.front().region);
  double total = 0.0;
  for (const auto& c : components_) {
    validate_region(c.region);
    detail::require(region_dim(c.region) == dim_, "DataMeasure: mixed dimensions");
    detail::require(std::isfinite(c.weight) && c.weight >= 0.0, "DataMeasure: weights must be nonnegative");
    total += c.weight;
  }
  detail::require(std::abs(total - 1.0) <= 1e-9, "DataMeasure: weights must sum to 1");
  double acc = 0.0;
  for (auto& c : components_) {
    c.weight /= total;
    acc += c.weight;
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
}

DataMeasure DataMeasure::uniform_box(Point lo, Point hi) {
  return DataMeasure(MeasureKind::UniformBox, {MeasureComponent{1.0, Box{std::move(lo), std::move(hi)}}});
}

DataMeasure DataMeasure::uniform_on_regions(std::vector<Region> regions) {
  detail::require(!regions.empty(), "DataMeasure: need at least one region");
  double total = 0.0;
  for (const auto& r : regions) {
    validate_region(r);
    total += region_volume(r);
  }
  std::vector<MeasureComponent> comps;
  for (auto& r : regions) {
    const double w = region_volume(r) / total;
    comps.push_back(MeasureComponent{w, std::move(r)});
  }
  return DataMeasure(MeasureKind::UniformOnRegions, std::move(comps));
}

DataMeasure DataMeasure::mixture(std::vector<MeasureComponent> components) {
  return DataMeasure(MeasureKind::Mixture, std::move(components));
}

void DataMeasure::draw(Rng& rng, std::span<double> out) const {
  detail::require(out.size() == dim_, "DataMeasure::draw: dimension mismatch");
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), components_.size() - 1);
  draw_region(components_[k].region, rng, out);
}

double DataMeasure::density(PointView x) const {
  detail::require(x.size() == dim_, "DataMeasure::density: dimension mismatch");
  double d = 0.0;
  for (const auto& c : components_) {
    if (region_contains(c.region, x)) d += c.weight / region_volume(c.region);
  }
  return d;
}

MassReport region_mass(const DataMeasure& px, std::span<const Ball> balls, std::uint64_t seed,
                       std::size_t mc_samples) {
  for (const auto& b : balls) detail::require(b.dim() == px.dim(), "region_mass: dimension mismatch");
  require_disjoint(balls);
  MassReport rep;
  for (std::size_t k = 0; k < px.components().size(); ++k) {
    const auto& comp = px.components()[k];
    for (std::size_t j = 0; j < balls.size(); ++j) {
      if (auto m = exact_ball_mass(comp.region, balls[j])) {
        rep.value += comp.weight * *m;
        continue;
      }
      rep.exact = false;
      Rng rng(mix_seed({seed, k, j}));
      Point x(px.dim());
      std::size_t hits = 0;
      for (std::size_t i = 0; i < mc_samples; ++i) {
        draw_region(comp.region, rng, x);
        if (squared_distance(x, balls[j].center) <= balls[j].radius * balls[j].radius) ++hits;
      }
      rep.value += comp.weight * static_cast<double>(hits) / static_cast<double>(mc_samples);
    }
  }
  rep.value = std::clamp(rep.value, 0.0, 1.0);
  return rep;
}

MassReport region_mass(const DataMeasure& px, const IntervalSet& set) {
  detail::require(px.dim() == 1, "region_mass: intervals need a one-dimensional measure");
  MassReport rep;
  for (const auto& comp : px.components()) {
    const Interval iv = as_interval(comp.region);
    rep.value += comp.weight * set.overlap(iv.lo, iv.hi) / (iv.hi - iv.lo);
  }
  rep.value = std::clamp(rep.value, 0.0, 1.0);
  return rep;
}

MassReport region_mass(const DataMeasure& px, const Box& box) {
  detail::require(box.dim() == px.dim(), "region_mass: dimension mismatch");
  MassReport rep;
  for (const auto& comp : px.components()) {
    if (const auto* b = std::get_if<Box>(&comp.region)) {
      double frac = 1.0;
      for (std::size_t i = 0; i < box.dim(); ++i) {
        const double lo = std::max(b->lo[i], box.lo[i]);
        const double hi = std::min(b->hi[i], box.hi[i]);
        frac *= std::max(0.0, hi - lo) / (b->hi[i] - b->lo[i]);
      }
      rep.value += comp.weight * frac;
      continue;
    }
    const auto& ball = std::get<Ball>(comp.region);
    const Relation rel = relate(box, ball);
    if (rel == Relation::Inside) {
      rep.value += comp.weight;
    } else if (rel != Relation::Outside) {
      throw UnsupportedOperation("region_mass: box clipping a ball component has no closed form");
    }
  }
  rep.value = std::clamp(rep.value, 0.0, 1.0);
  return rep;
}

double risk_z(double confidence) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * confidence);
}

double pointwise_loss(int f, double h) { return f == 1 ? 1.0 - h : h; }

namespace {

RiskReport exact_report(double value) {
  RiskReport r;
  r.value = std::clamp(value, 0.0, 1.0);
  r.ci_low = r.ci_high = r.value;
  r.mode = EvalMode::Exact;
  return r;
}

const PiecewiseConstant* one_dim_pieces(const Conditional& h, std::optional<Piecewise1DConditional>& storage) {
  if (const auto* p = std::get_if<Piecewise1DConditional>(&h)) return &p->pieces();
  if (const auto* b = std::get_if<BallUnionConditional>(&h); b && b->dim() == 1) {
    storage = to_piecewise(*b);
    return &storage->pieces();
  }
  return nullptr;
}

std::optional<double> exact_risk_1d(const HardClassifier& f, const PiecewiseConstant& h, const DataMeasure& px) {
  const auto& st = f.structure();
  const auto* constant = std::get_if<ConstantLabel>(&st);
  const auto* set = std::get_if<IntervalSet>(&st);
  if (!constant && !set) return std::nullopt;

  std::vector<double> knots = h.breaks;
  if (set) {
    for (const auto& iv : set->parts()) {
      knots.push_back(iv.lo);
      knots.push_back(iv.hi);
    }
  }
  for (const auto& c : px.components()) {
    const Interval iv = as_interval(c.region);
    knots.push_back(iv.lo);
    knots.push_back(iv.hi);
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double m = 0.5 * (knots[i] + knots[i + 1]);
    const double dens = px.density(std::span<const double>(&m, 1));
    if (dens == 0.0) continue;
    const int label = constant ? constant->label : (set->contains(m) ? 1 : 0);
    total += dens * (knots[i + 1] - knots[i]) * pointwise_loss(label, h(m));
  }
  return total;
}

std::optional<double> exact_risk_balls(const HardClassifier& f, const BallUnionConditional& h, const DataMeasure& px) {
  const auto& st = f.structure();
  const auto* constant = std::get_if<ConstantLabel>(&st);
  const auto* ballset = std::get_if<BallSetRegion>(&st);
  if (!constant && !ballset) return std::nullopt;

  double mass_h = 0.0;
  for (const auto& comp : px.components()) {
    for (const auto& b : h.balls()) {
      auto m = exact_ball_mass(comp.region, b);
      if (!m) return std::nullopt;
      mass_h += comp.weight * *m;
    }
  }
  const double eh = h.level() * mass_h;
  if (constant) return constant->label == 1 ? 1.0 - eh : eh;

  double ef = 0.0;
  double efh = 0.0;
  for (const auto& comp : px.components()) {
    for (const auto& fb : ballset->balls) {
      auto m = exact_ball_mass(comp.region, fb);
      if (!m) return std::nullopt;
      ef += comp.weight * *m;
      for (const auto& hb : h.balls()) {
        auto l = exact_lens_mass(comp.region, fb, hb);
        if (!l) return std::nullopt;
        efh += comp.weight * *l;
      }
    }
  }
  return ef + eh - 2.0 * h.level() * efh;
}

}  // namespace

RiskReport risk(const HardClassifier& f, const Conditional& h, const DataMeasure& px, const RiskOptions& opt) {
  detail::require(f.dim() == dimension(h) && f.dim() == px.dim(), "risk: dimension mismatch");
  if (opt.mode == EvalMode::Exact) {
    std::optional<double> value;
    std::optional<Piecewise1DConditional> storage;
    if (const auto* pieces = one_dim_pieces(h, storage)) {
      value = exact_risk_1d(f, *pieces, px);
    } else if (const auto* balls = std::get_if<BallUnionConditional>(&h)) {
      value = exact_risk_balls(f, *balls, px);
    }
    if (!value) throw UnsupportedOperation("risk: exact mode requested but the regions are not tractable");
    return exact_report(*value);
  }

  detail::require(opt.mc_samples >= 2, "risk: need at least two samples");
  Rng rng(opt.seed);
  Point x(px.dim());
  double sum = 0.0;
  double sum2 = 0.0;
  for (std::size_t i = 0; i < opt.mc_samples; ++i) {
    px.draw(rng, x);
    const double l = pointwise_loss(f(x), evaluate(h, x));
    sum += l;
    sum2 += l * l;
  }
  const auto n = static_cast<double>(opt.mc_samples);
  RiskReport r;
  r.mode = EvalMode::MonteCarlo;
  r.n = opt.mc_samples;
  r.seed = opt.seed;
  r.value = sum / n;
  const double var = std::max(0.0, (sum2 - n * r.value * r.value) / (n - 1.0));
  r.std_error = std::sqrt(var / n);
  const double z = risk_z();
  r.ci_low = r.value - z * r.std_error;
  r.ci_high = r.value + z * r.std_error;
  return r;
}

RiskReport paired_risk_difference(const HardClassifier& f1, const HardClassifier& f2, const Conditional& h,
                                  const DataMeasure& px, std::size_t n, std::uint64_t seed) {
  detail::require(n >= 2, "paired_risk_difference: need at least two samples");
  Rng rng(seed);
  Point x(px.dim());
  double sum = 0.0;
  double sum2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    px.draw(rng, x);
    const double hv = evaluate(h, x);
    const double d = pointwise_loss(f1(x), hv) - pointwise_loss(f2(x), hv);
    sum += d;
    sum2 += d * d;
  }
  const auto nn = static_cast<double>(n);
  RiskReport r;
  r.mode = EvalMode::MonteCarlo;
  r.n = n;
  r.seed = seed;
  r.value = sum / nn;
  r.std_error = std::sqrt(std::max(0.0, (sum2 - nn * r.value * r.value) / (nn - 1.0)) / nn);
  const double z = risk_z();
  r.ci_low = r.value - z * r.std_error;
  r.ci_high = r.value + z * r.std_error;
  return r;
}

RiskReport excess_risk(const Conditional& h, const DataMeasure& px, const SmoothingConfig& cfg,
                       std::size_t mc_points) {
  const HardClassifier pipeline = two_stage(h, cfg);
  const HardClassifier base = psi_of(h);
  if (cfg.mode == EvalMode::Exact) {
    RiskOptions opt;
    const auto a = risk(pipeline, h, px, opt);
    const auto b = risk(base, h, px, opt);
    RiskReport r = exact_report(0.0);
    r.value = a.value - b.value;
    r.ci_low = r.ci_high = r.value;
    return r;
  }
  return paired_risk_difference(pipeline, base, h, px, mc_points, cfg.seed);
}

ClosedFormExcess closed_form_excess(const BallUnionConditional& c, const DataMeasure& px,
                                    const std::optional<NoiseModel>& alpha_model,
                                    const std::optional<NoiseModel>& beta_model) {
  ClosedFormExcess out;
  out.shrinkage = beta_shrinkage(alpha_shrinkage(c, alpha_model), beta_model);
  std::vector<Ball> shrunk;
  for (std::size_t j = 0; j < c.balls().size(); ++j) {
    shrunk.push_back(Ball{c.balls()[j].center, out.shrinkage.alpha_beta_radius[j]});
  }
  const auto mi = region_mass(px, c.balls());
  const auto ms = region_mass(px, shrunk);
  out.mass_union = mi.value;
  out.mass_shrunk = ms.value;
  const double tau = c.tau();
  out.value = (0.5 + tau) * mi.value - 2.0 * tau * ms.value - (0.5 - tau) * mi.value;
  out.approximate = !mi.exact || !ms.exact;
  if (c.balls().size() >= 2) {
    const double zeta = lower_interference_distance(c);
    out.approximate = out.approximate || !proof_regime(zeta, alpha_model) || !proof_regime(zeta, beta_model);
  }
  return out;
}

std::vector<LabeledPoint> sample_labeled(const Conditional& h, const DataMeasure& px, std::size_t n,
                                         std::uint64_t seed) {
  detail::require(dimension(h) == px.dim(), "sample_labeled: dimension mismatch");
  Rng rng(seed);
  std::vector<LabeledPoint> out(n);
  for (auto& p : out) {
    p.x.resize(px.dim());
    px.draw(rng, p.x);
    p.y = rng.uniform() < evaluate(h, p.x) ? 1 : 0;
  }
  return out;
}

double empirical_delta(const HardClassifier& pipeline, std::span<const LabeledPoint> test_set) {
  detail::require(!test_set.empty(), "empirical_delta: empty test set");
  std::size_t wrong = 0;
  for (const auto& p : test_set) {
    if (pipeline(p.x) != p.y) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(test_set.size());
}

}  // namespace smoothlab
