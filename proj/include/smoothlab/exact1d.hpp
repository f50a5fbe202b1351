#pragma once

#include <vector>

#include "smoothlab/geometry.hpp"
#include "smoothlab/noise_models.hpp"

namespace smoothlab {

/// Piecewise-constant function on [breaks.front(), breaks.back()], zero outside.
/// values[k] holds on [breaks[k], breaks[k+1]).
struct PiecewiseConstant {
  std::vector<double> breaks;
  std::vector<double> values;

  double operator()(double x) const;
  /// ∫_{-∞}^{x} f.
  double antiderivative(double x) const;
};

PiecewiseConstant indicator(const IntervalSet& set);

/// {x : f(x) ≥ level}.
IntervalSet superlevel_set(const PiecewiseConstant& f, double level);

/// Convolution of a piecewise-constant function with 1D noise.
/// UniformBall gives a continuous piecewise-linear result held as knots, so its
/// superlevel sets are exact. GaussianIso is evaluated through erfc sums and
/// thresholded by scan plus bisection.
class Convolved1D {
 public:
  Convolved1D(PiecewiseConstant f, const NoiseModel& noise);

  double operator()(double x) const;
  IntervalSet superlevel_set(double level) const;

 private:
  PiecewiseConstant f_;
  NoiseFamily family_;
  double scale_;
  std::vector<double> knots_;
  std::vector<double> knot_values_;
};

}  // namespace smoothlab
