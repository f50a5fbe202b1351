#pragma once

#include <cstddef>
#include <cstdint>

#include "smoothlab/classifiers.hpp"
#include "smoothlab/risk.hpp"

namespace smoothlab::harness {

/// Rejection sampler for disjoint equal-radius balls: centres are drawn
/// uniformly in `domain`, each draw consuming one attempt. A centre closer
/// than r to the boundary is discarded; otherwise it is kept iff it lies
/// farther than zeta + 2r from every kept centre.
BallUnionConditional sample_sphere_config(const Box& domain, double zeta, double r, std::size_t attempts,
                                          std::uint64_t seed, double tau = 0.1);

}  // namespace smoothlab::harness
