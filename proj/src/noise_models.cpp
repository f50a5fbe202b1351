#include "smoothlab/noise_models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/non_central_chi_squared.hpp>

#include "smoothlab/errors.hpp"

namespace smoothlab {

std::string_view to_string(NoiseFamily f) {
  return f == NoiseFamily::UniformBall ? "uniform" : "gaussian";
}

NoiseFamily parse_noise_family(std::string_view s) {
  if (s == "uniform" || s == "UniformBall") return NoiseFamily::UniformBall;
  if (s == "gaussian" || s == "GaussianIso") return NoiseFamily::GaussianIso;
  throw InvalidArgument("unknown noise family: " + std::string(s));
}

NoiseModel::NoiseModel(NoiseFamily family, double scale, std::size_t dim)
    : family_(family), scale_(scale), dim_(dim) {
  detail::require(std::isfinite(scale) && scale > 0.0, "NoiseModel: scale must be positive");
  detail::require(dim >= 1, "NoiseModel: dimension must be at least 1");
}

std::optional<NoiseModel> make_noise(NoiseFamily family, double scale, std::size_t dim) {
  detail::require(scale >= 0.0, "make_noise: negative scale");
  if (scale == 0.0) return std::nullopt;
  return NoiseModel(family, scale, dim);
}

double pdf(const NoiseModel& model, std::span<const double> x) {
  detail::require(x.size() == model.dim(), "pdf: dimension mismatch");
  const double n = norm(x);
  const double theta = model.scale();
  const auto d = static_cast<double>(model.dim());
  if (model.family() == NoiseFamily::UniformBall) {
    return n <= theta ? 1.0 / ball_volume(model.dim(), theta) : 0.0;
  }
  return std::exp(-0.5 * n * n / (theta * theta) - 0.5 * d * std::log(2.0 * std::numbers::pi * theta * theta));
}

void draw(const NoiseModel& model, Rng& rng, std::span<double> out) {
  const double theta = model.scale();
  if (model.family() == NoiseFamily::GaussianIso) {
    for (double& v : out) v = theta * rng.normal();
    return;
  }
  if (out.size() == 1) {
    out[0] = theta * (2.0 * rng.uniform() - 1.0);
    return;
  }
  double s = 0.0;
  do {
    s = 0.0;
    for (double& v : out) {
      v = rng.normal();
      s += v * v;
    }
  } while (s == 0.0);
  const double radius = theta * std::pow(rng.uniform(), 1.0 / static_cast<double>(out.size()));
  const double k = radius / std::sqrt(s);
  for (double& v : out) v *= k;
}

std::vector<Point> sample(const NoiseModel& model, std::uint64_t seed, std::size_t n) {
  detail::require(n >= 1, "sample: n must be at least 1");
  Rng rng(seed);
  std::vector<Point> out(n, Point(model.dim()));
  for (auto& p : out) draw(model, rng, p);
  return out;
}

double shifted_cdf_radial(const NoiseModel& model, double r, double t) {
  detail::require(r >= 0.0, "shifted_cdf: negative radius");
  t = std::abs(t);
  if (r == 0.0) return 0.0;
  const double theta = model.scale();
  const std::size_t d = model.dim();

  if (model.family() == NoiseFamily::UniformBall) {
    const double v = ball_intersection_volume(d, theta, r, t) / ball_volume(d, theta);
    return std::clamp(v, 0.0, 1.0);
  }

  if (d == 1) {
    const double k = 1.0 / (theta * std::numbers::sqrt2);
    return std::clamp(0.5 * (std::erfc((t - r) * k) - std::erfc((t + r) * k)), 0.0, 1.0);
  }
  const auto dof = static_cast<double>(d);
  // Beyond this many scales the noise norm exceeds the gap with probability below 1e-300.
  const double far = std::sqrt(1600.0 + 4.0 * dof);
  if (t - r >= far * theta) return 0.0;
  if (r - t >= far * theta) return 1.0;
  // ‖x − Z‖²/θ² is noncentral chi-squared with d dof and λ = ‖x‖²/θ².
  const double q = (r * r) / (theta * theta);
  const double lambda = (t * t) / (theta * theta);
  if (lambda > 1e14) {
    const double shift = theta * theta * (dof - 1.0) / (2.0 * t);
    return std::clamp(0.5 * std::erfc((t + shift - r) / (theta * std::numbers::sqrt2)), 0.0, 1.0);
  }
  if (lambda == 0.0) return boost::math::cdf(boost::math::chi_squared_distribution<double>(dof), q);
  return boost::math::cdf(boost::math::non_central_chi_squared_distribution<double>(dof, lambda), q);
}

double shifted_cdf(const NoiseModel& model, double r, std::span<const double> x) {
  detail::require(x.size() == model.dim(), "shifted_cdf: dimension mismatch");
  return shifted_cdf_radial(model, r, norm(x));
}

double norm_inverse(const NoiseModel& model, double r, double c) {
  detail::require(r >= 0.0, "norm_inverse: negative radius");
  detail::require(c > 0.0 && c <= 1.0, "norm_inverse: level must lie in (0, 1]");
  if (shifted_cdf_radial(model, r, 0.0) < c) {
    throw InfeasibleLevel("norm_inverse: partition vanishes (level exceeds mass at the origin)");
  }
  double lo = 0.0;
  double hi = r + model.scale();
  for (int i = 0; i < 200 && shifted_cdf_radial(model, r, hi) >= c; ++i) hi *= 2.0;

  for (int it = 0; it < kBisectionMaxIter && hi - lo > kBisectionTol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (shifted_cdf_radial(model, r, mid) >= c) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double sqnorm_cdf(const NoiseModel& model, double t) {
  detail::require(t >= 0.0, "sqnorm_cdf: argument must be nonnegative");
  const double theta = model.scale();
  const auto d = static_cast<double>(model.dim());
  if (model.family() == NoiseFamily::UniformBall) {
    return std::min(1.0, std::pow(std::sqrt(t) / theta, d));
  }
  return boost::math::cdf(boost::math::chi_squared_distribution<double>(d), t / (theta * theta));
}

double sqnorm_cdf_inv(const NoiseModel& model, double c) {
  detail::require(c >= 0.0 && c <= 1.0, "sqnorm_cdf_inv: level must lie in [0, 1]");
  const double theta = model.scale();
  const auto d = static_cast<double>(model.dim());
  if (model.family() == NoiseFamily::UniformBall) {
    return theta * theta * std::pow(c, 2.0 / d);
  }
  if (c == 0.0) return 0.0;
  if (c == 1.0) return std::numeric_limits<double>::infinity();
  return theta * theta * boost::math::quantile(boost::math::chi_squared_distribution<double>(d), c);
}

double reach(const NoiseModel& model, double tail) {
  if (model.family() == NoiseFamily::UniformBall) return model.scale();
  const boost::math::chi_squared_distribution<double> chi(static_cast<double>(model.dim()));
  return model.scale() * std::sqrt(boost::math::quantile(boost::math::complement(chi, tail)));
}

RadialProfile::RadialProfile(const NoiseModel& model, double r, std::size_t nodes) {
  detail::require(nodes >= 2, "RadialProfile: need at least two nodes");
  t_max_ = r + reach(model);
  step_ = t_max_ / static_cast<double>(nodes - 1);
  values_.resize(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    values_[i] = shifted_cdf_radial(model, r, step_ * static_cast<double>(i));
  }
}

double RadialProfile::operator()(double t) const {
  if (t >= t_max_) return 0.0;
  const double u = t / step_;
  const auto i = static_cast<std::size_t>(u);
  if (i + 1 >= values_.size()) return values_.back();
  const double w = u - static_cast<double>(i);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

}  // namespace smoothlab
