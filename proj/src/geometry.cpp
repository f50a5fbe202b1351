#include "smoothlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>

#include "smoothlab/errors.hpp"

namespace smoothlab {

double norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  detail::require(a.size() == b.size(), "squared_distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

double unit_ball_volume(std::size_t d) {
  detail::require(d >= 1, "unit_ball_volume: dimension must be positive");
  const double half = 0.5 * static_cast<double>(d);
  return std::exp(half * std::log(std::numbers::pi) - std::lgamma(half + 1.0));
}

double ball_volume(std::size_t d, double r) {
  if (r <= 0.0) return 0.0;
  return unit_ball_volume(d) * std::pow(r, static_cast<double>(d));
}

double cap_volume(std::size_t d, double radius, double height) {
  if (height <= 0.0 || radius <= 0.0) return 0.0;
  if (height >= 2.0 * radius) return ball_volume(d, radius);
  if (height > radius) return ball_volume(d, radius) - cap_volume(d, radius, 2.0 * radius - height);

  switch (d) {
    case 1:
      return height;
    case 2: {
      const double a = radius - height;
      const double chord = std::sqrt(std::max(0.0, height * (2.0 * radius - height)));
      return radius * radius * std::atan2(chord, a) - a * chord;
    }
    case 3:
      return std::numbers::pi * height * height * (3.0 * radius - height) / 3.0;
    default: {
      const double x = std::clamp(height * (2.0 * radius - height) / (radius * radius), 0.0, 1.0);
      const double a = 0.5 * (static_cast<double>(d) + 1.0);
      return 0.5 * ball_volume(d, radius) * boost::math::ibeta(a, 0.5, x);
    }
  }
}

double ball_intersection_volume(std::size_t d, double r1, double r2, double dist) {
  detail::require(d >= 1, "ball_intersection_volume: dimension must be positive");
  if (r1 <= 0.0 || r2 <= 0.0) return 0.0;
  dist = std::abs(dist);
  if (dist >= r1 + r2) return 0.0;
  if (dist <= std::abs(r1 - r2)) return ball_volume(d, std::min(r1, r2));
  if (d == 1) {
    const double lo = std::max(-r1, dist - r2);
    const double hi = std::min(r1, dist + r2);
    return std::max(0.0, hi - lo);
  }
  // Signed distance from the first center to the radical hyperplane.
  const double c1 = (dist * dist + r1 * r1 - r2 * r2) / (2.0 * dist);
  const double c2 = dist - c1;
  return cap_volume(d, r1, r1 - c1) + cap_volume(d, r2, r2 - c2);
}

bool pairwise_disjoint(std::span<const Ball> balls, double slack) {
  for (std::size_t i = 0; i < balls.size(); ++i) {
    for (std::size_t j = i + 1; j < balls.size(); ++j) {
      const double gap = distance(balls[i].center, balls[j].center) - balls[i].radius - balls[j].radius;
      if (!(gap > slack)) return false;
    }
  }
  return true;
}

IntervalSet::IntervalSet(std::vector<Interval> parts) {
  std::erase_if(parts, [](const Interval& iv) { return !(iv.hi >= iv.lo); });
  std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (const auto& iv : parts) {
    if (!parts_.empty() && iv.lo <= parts_.back().hi) {
      parts_.back().hi = std::max(parts_.back().hi, iv.hi);
    } else {
      parts_.push_back(iv);
    }
  }
}

bool IntervalSet::contains(double x) const {
  auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  if (it == parts_.begin()) return false;
  --it;
  return x <= it->hi;
}

double IntervalSet::total_length() const {
  double s = 0.0;
  for (const auto& iv : parts_) s += iv.length();
  return s;
}

double IntervalSet::overlap(double a, double b) const {
  double s = 0.0;
  for (const auto& iv : parts_) {
    const double lo = std::max(a, iv.lo);
    const double hi = std::min(b, iv.hi);
    if (hi > lo) s += hi - lo;
  }
  return s;
}

bool IntervalSet::covers(double a, double b, double slack) const {
  return (b - a) - overlap(a, b) <= slack;
}

}  // namespace smoothlab
