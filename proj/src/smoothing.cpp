#include "smoothlab/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "smoothlab/errors.hpp"
#include "smoothlab/rng.hpp"

namespace smoothlab {

std::string_view to_string(EvalMode m) { return m == EvalMode::Exact ? "exact" : "mc"; }

EvalMode parse_eval_mode(std::string_view s) {
  if (s == "exact" || s == "Exact") return EvalMode::Exact;
  if (s == "mc" || s == "MonteCarlo" || s == "montecarlo") return EvalMode::MonteCarlo;
  throw InvalidArgument("unknown evaluation mode: " + std::string(s));
}

void SmoothingConfig::validate() const {
  detail::require(std::isfinite(alpha) && alpha >= 0.0, "SmoothingConfig: alpha must be nonnegative");
  detail::require(std::isfinite(beta) && beta >= 0.0, "SmoothingConfig: beta must be nonnegative");
  detail::require(mode == EvalMode::Exact || mc_samples >= 1, "SmoothingConfig: mc_samples must be positive");
}

std::optional<NoiseModel> SmoothingConfig::alpha_model(std::size_t dim) const {
  return make_noise(family, alpha, dim);
}

std::optional<NoiseModel> SmoothingConfig::beta_model(std::size_t dim) const {
  return make_noise(family, beta, dim);
}

std::pair<double, double> clopper_pearson(std::size_t k, std::size_t n, double confidence) {
  detail::require(n >= 1 && k <= n, "clopper_pearson: need 0 ≤ k ≤ n, n ≥ 1");
  using boost::math::binomial_distribution;
  const double a = 0.5 * (1.0 - confidence);
  const auto nn = static_cast<double>(n);
  const auto kk = static_cast<double>(k);
  const double lo = k == 0 ? 0.0 : binomial_distribution<>::find_lower_bound_on_p(nn, kk, a);
  const double hi = k == n ? 1.0 : binomial_distribution<>::find_upper_bound_on_p(nn, kk, a);
  return {lo, hi};
}

namespace {

std::uint64_t vote_seed(std::uint64_t seed) { return mix_seed({seed, 0x766f7465ULL}); }

double exact_vote(const HardClassifier& f, const NoiseModel& noise, PointView x) {
  const auto& st = f.structure();
  if (const auto* c = std::get_if<ConstantLabel>(&st)) return c->label;
  if (const auto* bs = std::get_if<BallSetRegion>(&st)) {
    double s = 0.0;
    for (const auto& b : bs->balls) s += shifted_cdf_radial(noise, b.radius, distance(x, b.center));
    return std::clamp(s, 0.0, 1.0);
  }
  if (const auto* iv = std::get_if<IntervalSet>(&st)) {
    if (iv->empty()) return 0.0;
    return Convolved1D(indicator(*iv), noise)(x[0]);
  }
  throw UnsupportedOperation("smooth_hard: exact mode needs a constant, ball-set or interval classifier");
}

double support_reach(const std::optional<NoiseModel>& noise) { return noise ? reach(*noise) : 0.0; }

std::optional<std::vector<Ball>> dilate(const std::optional<std::vector<Ball>>& support, double by) {
  if (!support) return std::nullopt;
  std::vector<Ball> out = *support;
  for (auto& b : out) b.radius += by;
  return out;
}

VoteResult vote_mc(const HardClassifier& f, const NoiseModel& noise, PointView x, const SmoothingConfig& cfg,
                   const std::optional<std::vector<Ball>>& far) {
  VoteResult r;
  r.mode = EvalMode::MonteCarlo;
  const std::size_t n = cfg.mc_samples;
  r.n = n;
  std::size_t k = 0;
  bool reachable = !far;
  if (far) {
    for (const auto& b : *far) {
      if (squared_distance(x, b.center) < b.radius * b.radius) {
        reachable = true;
        break;
      }
    }
  }
  if (reachable) {
    Rng rng(point_seed(vote_seed(cfg.seed), x));
    Point z(x.size());
    Point y(x.size());
    for (std::size_t i = 0; i < n; ++i) {
      draw(noise, rng, z);
      for (std::size_t j = 0; j < y.size(); ++j) y[j] = x[j] + z[j];
      k += static_cast<std::size_t>(f(y));
    }
  }
  r.s = static_cast<double>(k) / static_cast<double>(n);
  r.label = psi(r.s);
  std::tie(r.ci_low, r.ci_high) = clopper_pearson(k, n);
  return r;
}

}  // namespace

VoteResult smooth_hard(const HardClassifier& f, const std::optional<NoiseModel>& noise, PointView x,
                       const SmoothingConfig& cfg) {
  detail::require(x.size() == f.dim(), "smooth_hard: dimension mismatch");
  VoteResult r;
  r.mode = cfg.mode;
  if (!noise) {
    r.s = f(x);
    r.label = psi(r.s);
    r.ci_low = r.ci_high = r.s;
    r.mode = EvalMode::Exact;
    return r;
  }
  detail::require(noise->dim() == f.dim(), "smooth_hard: noise dimension mismatch");

  if (cfg.mode == EvalMode::Exact) {
    r.s = exact_vote(f, *noise, x);
    r.label = psi(r.s);
    r.ci_low = r.ci_high = r.s;
    return r;
  }

  return vote_mc(f, *noise, x, cfg, dilate(f.support(), reach(*noise)));
}

bool proof_regime(double zeta, const std::optional<NoiseModel>& noise) {
  return !noise || zeta > noise->scale();
}

bool noninteracting(double zeta, const std::optional<NoiseModel>& noise, std::size_t count) {
  if (!noise || count < 2) return true;
  if (noise->family() == NoiseFamily::UniformBall) return zeta > noise->scale();
  if (!(zeta > 0.0)) return false;
  const double half = 0.5 * zeta / noise->scale();
  const boost::math::chi_squared_distribution<double> chi(static_cast<double>(noise->dim()));
  const double tail = boost::math::cdf(boost::math::complement(chi, half * half));
  return static_cast<double>(count) * tail <= 1e-15;
}

std::vector<double> level_radii(std::span<const Ball> balls, double weight, const NoiseModel& noise) {
  auto field = [&](PointView y) {
    double s = 0.0;
    for (const auto& b : balls) s += shifted_cdf_radial(noise, b.radius, distance(y, b.center));
    return weight * s;
  };
  const double extent = reach(noise);
  std::vector<double> radii(balls.size(), 0.0);
  for (std::size_t j = 0; j < balls.size(); ++j) {
    const auto& c = balls[j].center;
    if (field(c) < 0.5) continue;
    // Probe toward the nearest neighbour, where interaction would show first.
    Point u(c.size(), 0.0);
    u[0] = 1.0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < balls.size(); ++k) {
      if (k == j) continue;
      const double d = distance(balls[k].center, c);
      if (d > 0.0 && d < best) {
        best = d;
        for (std::size_t i = 0; i < c.size(); ++i) u[i] = (balls[k].center[i] - c[i]) / d;
      }
    }
    Point y(c.size());
    auto at = [&](double t) {
      for (std::size_t i = 0; i < c.size(); ++i) y[i] = c[i] + t * u[i];
      return field(y);
    };
    double lo = 0.0;
    double hi = balls[j].radius + extent;
    for (int it = 0; it < kBisectionMaxIter && hi - lo > kBisectionTol; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (at(mid) >= 0.5) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    radii[j] = lo;
  }
  return radii;
}

namespace {

double min_gap(std::span<const Ball> balls) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < balls.size(); ++i) {
    for (std::size_t j = i + 1; j < balls.size(); ++j) {
      g = std::min(g, distance(balls[i].center, balls[j].center) - balls[i].radius - balls[j].radius);
    }
  }
  return g;
}

std::vector<Ball> with_radii(std::span<const Ball> balls, const std::vector<double>& radii) {
  std::vector<Ball> out;
  for (std::size_t j = 0; j < balls.size(); ++j) {
    if (radii[j] > 0.0) out.push_back(Ball{balls[j].center, radii[j]});
  }
  return out;
}

}  // namespace

HardClassifier threshold(const SoftConditional& soft, const SmoothingConfig& cfg) {
  const auto& noise = soft.noise();
  const std::size_t d = soft.dim();
  if (const auto* conv = soft.convolved_1d()) return HardClassifier::intervals(conv->superlevel_set(0.5));
  if (!noise) {
    if (const auto* b = soft.ball_source()) return psi_of(*b);
    if (const auto* p = soft.piecewise_source()) return psi_of(*p);
    return HardClassifier([soft](PointView x) { return psi(soft(x)); }, d);
  }
  if (const auto* src = soft.ball_source()) {
    const auto& balls = src->balls();
    if (cfg.mode == EvalMode::Exact) {
      if (!noninteracting(min_gap(balls), noise, balls.size())) {
        throw UnsupportedOperation("threshold: exact mode needs non-interacting balls");
      }
      return HardClassifier::ball_set(with_radii(balls, level_radii(balls, src->level(), *noise)), d);
    }
    std::vector<Ball> support;
    for (std::size_t j = 0; j < balls.size(); ++j) support.push_back(Ball{balls[j].center, soft.ball_reach(j)});
    return HardClassifier([soft](PointView x) { return psi(soft(x)); }, d, {}, std::move(support));
  }
  if (cfg.mode == EvalMode::Exact) throw UnsupportedOperation("threshold: exact mode unavailable for generic conditionals");
  return HardClassifier([soft](PointView x) { return psi(soft(x)); }, d);
}

HardClassifier smooth(const HardClassifier& f, const std::optional<NoiseModel>& noise, const SmoothingConfig& cfg) {
  if (!noise) return f;
  detail::require(noise->dim() == f.dim(), "smooth: noise dimension mismatch");
  const auto& st = f.structure();
  if (std::holds_alternative<ConstantLabel>(st)) return f;
  if (const auto* iv = std::get_if<IntervalSet>(&st)) {
    if (iv->empty()) return HardClassifier::intervals(*iv);
    return HardClassifier::intervals(Convolved1D(indicator(*iv), *noise).superlevel_set(0.5));
  }
  if (cfg.mode == EvalMode::Exact) {
    const auto* bs = std::get_if<BallSetRegion>(&st);
    if (!bs) throw UnsupportedOperation("smooth: exact mode needs a constant, ball-set or interval classifier");
    if (!noninteracting(min_gap(bs->balls), noise, bs->balls.size())) {
      throw UnsupportedOperation("smooth: exact mode needs non-interacting balls");
    }
    return HardClassifier::ball_set(with_radii(bs->balls, level_radii(bs->balls, 1.0, *noise)), f.dim());
  }
  auto far = dilate(f.support(), support_reach(noise));
  auto eval = [f, model = *noise, cfg, far](PointView x) { return vote_mc(f, model, x, cfg, far).label; };
  return HardClassifier(eval, f.dim(), {}, std::move(far));
}

HardClassifier two_stage(const Conditional& h, const SmoothingConfig& cfg) {
  cfg.validate();
  const std::size_t d = dimension(h);
  SoftOptions opts;
  opts.tabulate = cfg.mode == EvalMode::MonteCarlo;
  opts.mc_samples = cfg.mc_samples;
  opts.seed = mix_seed({cfg.seed, 0x736f6674ULL});
  const auto soft = soft_convolve(h, cfg.alpha_model(d), opts);
  return smooth(threshold(soft, cfg), cfg.beta_model(d), cfg);
}

Certificate certified_radius(double s, double beta, NoiseFamily family) {
  if (family != NoiseFamily::GaussianIso) {
    throw UnsupportedOperation("certified_radius: only the Gaussian family has a certificate");
  }
  detail::require(std::isfinite(beta) && beta > 0.0, "certified_radius: beta must be positive");
  detail::require(s >= 0.0 && s <= 1.0, "certified_radius: vote probability must lie in [0, 1]");
  Certificate c;
  if (s <= 0.5) {
    c.abstain = true;
    return c;
  }
  if (s > kMaxCertifiedVote) {
    s = kMaxCertifiedVote;
    c.capped = true;
  }
  c.radius = beta * boost::math::quantile(boost::math::normal_distribution<double>(), s);
  return c;
}

double alpha_shrink_radius(const std::optional<NoiseModel>& alpha_model, double r, double tau) {
  detail::require(r >= 0.0, "alpha_shrink_radius: negative radius");
  detail::require(tau >= 0.0 && tau <= 0.5, "alpha_shrink_radius: tau must lie in [0, 0.5]");
  if (!alpha_model) return r;
  try {
    return norm_inverse(*alpha_model, r, 0.5 / (0.5 + tau));
  } catch (const InfeasibleLevel&) {
    return 0.0;
  }
}

ShrinkageReport alpha_shrinkage(const BallUnionConditional& c, const std::optional<NoiseModel>& alpha_model) {
  ShrinkageReport rep;
  rep.tau = c.tau();
  for (const auto& b : c.balls()) {
    rep.radius.push_back(b.radius);
    double ra = b.radius;
    bool vanished = false;
    if (alpha_model) {
      try {
        ra = norm_inverse(*alpha_model, b.radius, 0.5 / (0.5 + c.tau()));
      } catch (const InfeasibleLevel&) {
        ra = 0.0;
        vanished = true;
      }
    }
    rep.alpha_radius.push_back(ra);
    rep.vanished_alpha.push_back(vanished);
  }
  if (c.balls().size() >= 2) rep.approximate = !proof_regime(lower_interference_distance(c), alpha_model);
  return rep;
}

ShrinkageReport beta_shrinkage(ShrinkageReport report, const std::optional<NoiseModel>& beta_model) {
  report.alpha_beta_radius.clear();
  report.vanished_beta.clear();
  for (std::size_t j = 0; j < report.alpha_radius.size(); ++j) {
    double rab = report.alpha_radius[j];
    bool vanished = report.vanished_alpha[j];
    if (!vanished && beta_model) {
      try {
        rab = norm_inverse(*beta_model, report.alpha_radius[j], 0.5);
      } catch (const InfeasibleLevel&) {
        rab = 0.0;
        vanished = true;
      }
    }
    if (report.vanished_alpha[j]) rab = 0.0;
    report.alpha_beta_radius.push_back(rab);
    report.vanished_beta.push_back(vanished);
  }
  return report;
}

}  // namespace smoothlab
