#include "smoothlab/harness/spheres.hpp"

#include "smoothlab/errors.hpp"
#include "smoothlab/rng.hpp"

namespace smoothlab::harness {

BallUnionConditional sample_sphere_config(const Box& domain, double zeta, double r, std::size_t attempts,
                                          std::uint64_t seed, double tau) {
  detail::require(r > 0.0, "sample_sphere_config: r must be positive");
  detail::require(attempts >= 1, "sample_sphere_config: attempts must be at least 1");
  detail::require(zeta >= 0.0, "sample_sphere_config: zeta must be nonnegative");
  detail::require(domain.dim() >= 1 && domain.hi.size() == domain.dim(), "sample_sphere_config: malformed domain");

  const std::size_t d = domain.dim();
  const double min_dist = zeta + 2.0 * r + kDisjointSlack;
  Rng rng(seed);
  std::vector<Ball> accepted;
  Point c(d);
  for (std::size_t a = 0; a < attempts; ++a) {
    bool inside = true;
    for (std::size_t i = 0; i < d; ++i) {
      c[i] = domain.lo[i] + (domain.hi[i] - domain.lo[i]) * rng.uniform();
      inside = inside && c[i] - r >= domain.lo[i] && c[i] + r <= domain.hi[i];
    }
    if (!inside) continue;
    bool far = true;
    for (const auto& b : accepted) {
      if (!(distance(c, b.center) > min_dist)) {
        far = false;
        break;
      }
    }
    if (far) accepted.push_back(Ball{c, r});
  }
  if (accepted.empty()) throw InvalidArgument("sample_sphere_config: no sphere accepted");
  return BallUnionConditional(std::move(accepted), tau);
}

}  // namespace smoothlab::harness
