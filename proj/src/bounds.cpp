#include "smoothlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "smoothlab/errors.hpp"
#include "smoothlab/rng.hpp"

namespace smoothlab {

PartitionSummary positive_partitions(const BallUnionConditional& c, double tau) {
  detail::require(tau >= 0.0 && tau <= c.tau(), "positive_partitions: tau must lie in [0, tau_h]");
  PartitionSummary s;
  s.tau = tau;
  s.dim = c.dim();
  for (const auto& b : c.balls()) s.parts.push_back({PartitionSign::Positive, b.center, b.radius});
  return s;
}

namespace {

/// √Ψ⁻¹(c), or +∞ when the level cannot be reached.
double root_sqnorm_inv(const std::optional<NoiseModel>& model, double c) {
  if (c > 1.0) return std::numeric_limits<double>::infinity();
  if (!model) return 0.0;
  return std::sqrt(sqnorm_cdf_inv(*model, c));
}

/// A_{θ,r}(c) with the identity model for θ = 0; negative when infeasible.
double level_radius(const std::optional<NoiseModel>& model, double r, double c) {
  if (c > 1.0 || r <= 0.0) return -1.0;
  if (!model) return r;
  try {
    return norm_inverse(*model, r, c);
  } catch (const InfeasibleLevel&) {
    return -1.0;
  }
}

}  // namespace

BoundReport main_upper_bound(const PartitionSummary& parts, const DataMeasure& px,
                             const std::optional<NoiseModel>& alpha_model,
                             const std::optional<NoiseModel>& beta_model, std::uint64_t seed) {
  detail::require(parts.tau >= 0.0 && parts.tau < 0.5, "main_upper_bound: tau must lie in [0, 0.5)");
  detail::require(parts.dim == px.dim(), "main_upper_bound: dimension mismatch");
  BoundReport rep;
  const double rb = root_sqnorm_inv(beta_model, 0.5);
  std::vector<Ball> kept;
  for (const auto& p : parts.parts) {
    detail::require(p.center.size() == parts.dim && p.inradius >= 0.0, "main_upper_bound: malformed partition");
    const double level = p.sign == PartitionSign::Positive ? 0.5 / (0.5 + parts.tau) : 0.5 / (0.5 - parts.tau);
    const double ra = root_sqnorm_inv(alpha_model, level);
    const double rab = ra + rb;
    rep.r_alpha.push_back(ra);
    rep.r_alpha_beta.push_back(rab);
    const double radius = p.inradius - rab;
    const bool clipped = !(radius > 0.0);
    rep.clipped.push_back(clipped);
    if (!clipped) kept.push_back(Ball{p.center, radius});
  }
  const auto mass = region_mass(px, kept, seed);
  rep.exact = mass.exact;
  rep.bound = std::clamp(1.0 - mass.value, 0.0, 1.0);
  return rep;
}

EtaRadii eta_shrinkage_radii(const BallUnionConditional& c, const std::optional<NoiseModel>& alpha_model, double eta) {
  detail::require(eta >= 0.0 && eta < 0.5, "eta_shrinkage_radii: eta must lie in [0, 0.5)");
  EtaRadii out;
  const double tau = c.tau();
  for (const auto& b : c.balls()) {
    const double p = level_radius(alpha_model, b.radius, (0.5 + eta) / (0.5 + tau));
    const double m = level_radius(alpha_model, b.radius, (0.5 - eta) / (0.5 + tau));
    out.plus.push_back(std::max(0.0, p));
    out.minus.push_back(std::max(0.0, m));
    out.vanished_plus.push_back(p < 0.0);
    out.vanished_minus.push_back(m < 0.0);
  }
  return out;
}

InexactBounds inexact_risk_bounds(const BallUnionConditional& c, const DataMeasure& px,
                                  const std::optional<NoiseModel>& alpha_model,
                                  const std::optional<NoiseModel>& beta_model, double eta) {
  if (c.balls().size() >= 2) {
    const double scale = std::max(alpha_model ? alpha_model->scale() : 0.0, beta_model ? beta_model->scale() : 0.0);
    detail::require(lower_interference_distance(c) > 2.0 * scale,
                    "inexact_risk_bounds: balls must be separated by more than twice the noise scales");
  }
  const auto radii = eta_shrinkage_radii(c, alpha_model, eta);
  const double tau = c.tau();
  InexactBounds out;
  bool any_a = false;
  bool any_b = false;
  double lower = 0.0;
  double upper = 0.0;
  for (std::size_t j = 0; j < c.balls().size(); ++j) {
    const Ball& ball = c.balls()[j];
    const double inner = radii.vanished_plus[j] ? 0.0 : std::max(0.0, level_radius(beta_model, radii.plus[j], 0.5));
    const double outer = radii.vanished_minus[j] ? 0.0 : std::max(0.0, level_radius(beta_model, radii.minus[j], 0.5));
    out.inner_radius.push_back(inner);
    out.outer_radius.push_back(outer);

    const Ball balls[] = {ball};
    const Ball inner_ball[] = {Ball{ball.center, inner}};
    const Ball outer_ball[] = {Ball{ball.center, outer}};
    const auto m_ball = region_mass(px, balls);
    const auto m_inner = region_mass(px, inner_ball);
    const auto m_outer = region_mass(px, outer_ball);
    out.exact = out.exact && m_ball.exact && m_inner.exact && m_outer.exact;

    const double bayes = (0.5 - tau) * m_ball.value;
    if (outer <= ball.radius) {
      any_a = true;
      lower += (0.5 + tau) * m_ball.value - 2.0 * tau * m_outer.value - bayes;
      upper += (0.5 + tau) * m_ball.value - 2.0 * tau * m_inner.value - bayes;
    } else {
      any_b = true;
      lower += (0.5 - tau) * m_ball.value - bayes;
      upper += (0.5 + tau) * m_ball.value - 2.0 * tau * m_inner.value + (m_outer.value - m_ball.value) - bayes;
    }
  }
  out.lower = lower;
  out.upper = upper;
  out.which = any_a && any_b ? InexactCase::Mixed : (any_b ? InexactCase::B : InexactCase::A);
  return out;
}

GeneralBound general_g_bound(const Conditional& h, const PerturbedClassifier& g, const DataMeasure& px,
                             const std::optional<NoiseModel>& alpha_model, double delta_h, std::size_t n,
                             std::uint64_t seed) {
  detail::require(n >= 2, "general_g_bound: need at least two samples");
  detail::require(g.dim() == px.dim() && dimension(h) == px.dim(), "general_g_bound: dimension mismatch");
  const auto soft = soft_convolve(h, alpha_model);
  Rng rng(seed);
  Point x(px.dim());
  std::size_t differ = 0;
  for (std::size_t i = 0; i < n; ++i) {
    px.draw(rng, x);
    if (std::abs(soft(x) - g(x)) > kValueEqualityTol) ++differ;
  }
  GeneralBound out;
  const auto nn = static_cast<double>(n);
  out.disagreement = static_cast<double>(differ) / nn;
  out.std_error = std::sqrt(out.disagreement * (1.0 - out.disagreement) / nn);
  out.bound = delta_h + out.disagreement;
  return out;
}

}  // namespace smoothlab
