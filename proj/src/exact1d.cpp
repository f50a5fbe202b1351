#include "smoothlab/exact1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "smoothlab/errors.hpp"

namespace smoothlab {

double PiecewiseConstant::operator()(double x) const {
  if (breaks.size() < 2 || x < breaks.front() || x > breaks.back()) return 0.0;
  auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
  auto k = static_cast<std::size_t>(std::distance(breaks.begin(), it));
  k = std::min(k == 0 ? 0 : k - 1, values.size() - 1);
  return values[k];
}

double PiecewiseConstant::antiderivative(double x) const {
  double s = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (x <= breaks[k]) break;
    s += values[k] * (std::min(x, breaks[k + 1]) - breaks[k]);
  }
  return s;
}

PiecewiseConstant indicator(const IntervalSet& set) {
  PiecewiseConstant f;
  for (const auto& iv : set.parts()) {
    if (!f.breaks.empty() && f.breaks.back() < iv.lo) f.values.push_back(0.0);
    if (f.breaks.empty() || f.breaks.back() < iv.lo) f.breaks.push_back(iv.lo);
    f.values.push_back(1.0);
    f.breaks.push_back(iv.hi);
  }
  return f;
}

IntervalSet superlevel_set(const PiecewiseConstant& f, double level) {
  detail::require(level > 0.0, "superlevel_set: level must be positive");
  std::vector<Interval> parts;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    if (f.values[k] >= level) parts.push_back({f.breaks[k], f.breaks[k + 1]});
  }
  return IntervalSet(std::move(parts));
}

Convolved1D::Convolved1D(PiecewiseConstant f, const NoiseModel& noise)
    : f_(std::move(f)), family_(noise.family()), scale_(noise.scale()) {
  detail::require(noise.dim() == 1, "Convolved1D: noise must be one-dimensional");
  detail::require(f_.breaks.size() == f_.values.size() + 1, "Convolved1D: malformed piecewise function");
  if (family_ == NoiseFamily::UniformBall) {
    for (double b : f_.breaks) {
      knots_.push_back(b - scale_);
      knots_.push_back(b + scale_);
    }
    std::sort(knots_.begin(), knots_.end());
    knots_.erase(std::unique(knots_.begin(), knots_.end()), knots_.end());
    knot_values_.reserve(knots_.size());
    for (double x : knots_) knot_values_.push_back((*this)(x));
  }
}

double Convolved1D::operator()(double x) const {
  if (f_.values.empty()) return 0.0;
  if (family_ == NoiseFamily::UniformBall) {
    const double a = x - scale_, b = x + scale_;
    double mass = 0.0;
    for (std::size_t i = 0; i < f_.values.size(); ++i) {
      const double len = std::min(b, f_.breaks[i + 1]) - std::max(a, f_.breaks[i]);
      if (len > 0.0) mass += f_.values[i] * len;
    }
    return std::clamp(mass / (2.0 * scale_), 0.0, 1.0);
  }
  const double k = 1.0 / (scale_ * std::numbers::sqrt2);
  double s = 0.0;
  for (std::size_t i = 0; i < f_.values.size(); ++i) {
    if (f_.values[i] == 0.0) continue;
    // P(b_i ≤ x − Z < b_{i+1}) written with upper tails of Z to avoid cancellation.
    const double lo = (x - f_.breaks[i + 1]) * k;
    const double hi = (x - f_.breaks[i]) * k;
    double p = 0.0;
    if (lo >= 0.0) {
      p = 0.5 * (std::erfc(lo) - std::erfc(hi));
    } else if (hi <= 0.0) {
      p = 0.5 * (std::erfc(-hi) - std::erfc(-lo));
    } else {
      p = 1.0 - 0.5 * std::erfc(-lo) - 0.5 * std::erfc(hi);
    }
    s += f_.values[i] * p;
  }
  return std::clamp(s, 0.0, 1.0);
}

IntervalSet Convolved1D::superlevel_set(double level) const {
  detail::require(level > 0.0, "superlevel_set: level must be positive");
  std::vector<Interval> parts;
  if (f_.values.empty()) return IntervalSet{};

  if (family_ == NoiseFamily::UniformBall) {
    for (std::size_t i = 0; i + 1 < knots_.size(); ++i) {
      const double x0 = knots_[i], x1 = knots_[i + 1];
      const double y0 = knot_values_[i], y1 = knot_values_[i + 1];
      const bool in0 = y0 >= level, in1 = y1 >= level;
      if (in0 && in1) {
        parts.push_back({x0, x1});
      } else if (in0 || in1) {
        const double xc = x0 + (level - y0) / (y1 - y0) * (x1 - x0);
        parts.push_back(in0 ? Interval{x0, xc} : Interval{xc, x1});
      }
    }
    return IntervalSet(std::move(parts));
  }

  // Gaussian: the function only varies near breakpoints, so sample densely
  // there and bisect every sign change.
  const double window = scale_ * 9.0;
  const double step = scale_ / 64.0;
  const int half = static_cast<int>(std::ceil(window / step));
  std::vector<double> xs;
  for (double b : f_.breaks) {
    for (int j = -half; j <= half; ++j) xs.push_back(b + j * step);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  auto root = [&](double a, double b) {
    const bool in_a = (*this)(a) >= level;
    for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
      const double m = 0.5 * (a + b);
      if (((*this)(m) >= level) == in_a) {
        a = m;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  };

  std::vector<double> ys(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = (*this)(xs[i]);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const bool in0 = ys[i] >= level, in1 = ys[i + 1] >= level;
    if (in0 && in1) {
      parts.push_back({xs[i], xs[i + 1]});
    } else if (in0 || in1) {
      const double xc = root(xs[i], xs[i + 1]);
      parts.push_back(in0 ? Interval{xs[i], xc} : Interval{xc, xs[i + 1]});
    }
  }
  return IntervalSet(std::move(parts));
}

}  // namespace smoothlab
