#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace smoothlab {

using Point = std::vector<double>;

struct Ball {
  Point center;
  double radius = 0.0;

  std::size_t dim() const { return center.size(); }
};

double norm(std::span<const double> x);
double squared_distance(std::span<const double> a, std::span<const double> b);
double distance(std::span<const double> a, std::span<const double> b);

/// Volume of the unit ball in R^d.
double unit_ball_volume(std::size_t d);
double ball_volume(std::size_t d, double r);

/// Volume of the cap of height h in [0, 2R] cut from a d-ball of radius R.
double cap_volume(std::size_t d, double radius, double height);

/// Volume of B(a, r1) ∩ B(b, r2) with ‖a − b‖ = dist, in R^d.
/// Closed forms for d ≤ 3, regularized incomplete beta caps above.
double ball_intersection_volume(std::size_t d, double r1, double r2, double dist);

/// Whether every pair of balls is separated by more than `slack`.
bool pairwise_disjoint(std::span<const Ball> balls, double slack = 0.0);

/// Closed interval on the real line.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi > lo ? hi - lo : 0.0; }
};

/// Sorted union of disjoint closed intervals. Construction merges overlaps.
class IntervalSet {
 public:
  IntervalSet() = default;
  explicit IntervalSet(std::vector<Interval> parts);

  const std::vector<Interval>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  bool contains(double x) const;
  double total_length() const;
  /// Length of the intersection with [a, b].
  double overlap(double a, double b) const;
  /// Uncovered length inside [a, b] is at most `slack`.
  bool covers(double a, double b, double slack = 0.0) const;

 private:
  std::vector<Interval> parts_;
};

}  // namespace smoothlab
