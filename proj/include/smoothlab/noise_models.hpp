#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smoothlab/geometry.hpp"
#include "smoothlab/rng.hpp"

namespace smoothlab {

enum class NoiseFamily { UniformBall, GaussianIso };

std::string_view to_string(NoiseFamily f);
NoiseFamily parse_noise_family(std::string_view s);

/// Spherically symmetric, norm-decreasing noise with one scale parameter:
/// the radius of the support ball (UniformBall) or the per-axis standard
/// deviation (GaussianIso).
class NoiseModel {
 public:
  NoiseModel(NoiseFamily family, double scale, std::size_t dim);

  NoiseFamily family() const { return family_; }
  double scale() const { return scale_; }
  std::size_t dim() const { return dim_; }

 private:
  NoiseFamily family_;
  double scale_;
  std::size_t dim_;
};

/// Scale zero means "no noise"; the stage is the identity.
std::optional<NoiseModel> make_noise(NoiseFamily family, double scale, std::size_t dim);

double pdf(const NoiseModel& model, std::span<const double> x);

/// One draw written into `out` (size dim).
void draw(const NoiseModel& model, Rng& rng, std::span<double> out);
std::vector<Point> sample(const NoiseModel& model, std::uint64_t seed, std::size_t n);

/// Noise mass inside B(x, r). Depends on x only through ‖x‖.
double shifted_cdf(const NoiseModel& model, double r, std::span<const double> x);
double shifted_cdf_radial(const NoiseModel& model, double r, double offset_norm);

/// Largest ‖x‖ with shifted_cdf(model, r, x) ≥ c, by bisection on the norm.
/// Throws InfeasibleLevel when c exceeds the mass at the origin.
double norm_inverse(const NoiseModel& model, double r, double c);

/// CDF of ‖z‖² for z drawn from the model, and its inverse.
double sqnorm_cdf(const NoiseModel& model, double t);
double sqnorm_cdf_inv(const NoiseModel& model, double c);

/// Radius holding all but `tail` of the noise mass (exact support for UniformBall).
double reach(const NoiseModel& model, double tail = 1e-16);

inline constexpr double kBisectionTol = 1e-10;
inline constexpr int kBisectionMaxIter = 200;

/// Tabulated t ↦ shifted_cdf_radial(model, r, t) for Monte-Carlo inner loops.
/// Linear interpolation on a uniform grid; zero beyond r + reach(model).
class RadialProfile {
 public:
  RadialProfile(const NoiseModel& model, double r, std::size_t nodes = 16384);

  double operator()(double offset_norm) const;
  double support() const { return t_max_; }

 private:
  double t_max_ = 0.0;
  double step_ = 1.0;
  std::vector<double> values_;
};

}  // namespace smoothlab
