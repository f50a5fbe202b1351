#include "smoothlab/harness/validation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "smoothlab/errors.hpp"
#include "smoothlab/harness/spheres.hpp"
#include "smoothlab/rng.hpp"

namespace smoothlab::harness {

namespace {

constexpr std::uint64_t kParamsTag = 0x706172616d73ULL;
constexpr std::uint64_t kSpheresTag = 0x73706865726573ULL;
constexpr std::uint64_t kPointsTag = 0x706f696e7473ULL;
constexpr std::uint64_t kVotesTag = 0x766f746573ULL;
constexpr std::uint64_t kBumpsTag = 0x62756d7073ULL;
constexpr std::uint64_t kDisagreeTag = 0x6469736167ULL;

constexpr std::array<double, 5> kZetaChoices{0.0, 2.0, 5.0, 10.0, 20.0};

double between(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

double realised_gap(const BallUnionConditional& h) {
  return h.balls().size() >= 2 ? lower_interference_distance(h) : std::numeric_limits<double>::infinity();
}

BoundRow bound_instance(const Scenario& sc, std::size_t i) {
  Rng prng(mix_seed({sc.seed, i, kParamsTag}));
  BoundRow row;
  row.instance = i;
  row.seed = sc.seed;
  row.radius = between(prng, 5.0, 15.0);
  row.zeta = kZetaChoices[static_cast<std::size_t>(prng.uniform() * kZetaChoices.size()) % kZetaChoices.size()];
  const bool gaussian = prng.uniform() < 0.5;
  row.family = sc.mixed_noise ? (gaussian ? NoiseFamily::GaussianIso : NoiseFamily::UniformBall) : sc.family;
  row.alpha = between(prng, 0.0, 6.0);
  row.beta = between(prng, 0.0, 6.0);
  row.tau_h = between(prng, 0.05, 0.45);

  const auto h = sample_sphere_config(sc.domain, row.zeta, row.radius, sc.attempts,
                                      mix_seed({sc.seed, i, kSpheresTag}), row.tau_h);
  row.spheres = h.balls().size();
  row.zeta_actual = realised_gap(h);
  const auto px = DataMeasure::uniform_box(sc.domain.lo, sc.domain.hi);

  SmoothingConfig cfg;
  cfg.family = row.family;
  cfg.alpha = row.alpha;
  cfg.beta = row.beta;
  cfg.mode = EvalMode::MonteCarlo;
  cfg.mc_samples = sc.mc_votes;
  cfg.seed = mix_seed({sc.seed, i, kVotesTag});
  const auto am = cfg.alpha_model(h.dim());
  const auto bm = cfg.beta_model(h.dim());

  row.bound = std::numeric_limits<double>::infinity();
  for (double tau : sc.tau_grid) {
    if (tau > row.tau_h) continue;
    const auto rep = main_upper_bound(positive_partitions(h, tau), px, am, bm, mix_seed({sc.seed, i, kPointsTag}));
    if (rep.bound < row.bound) {
      row.bound = rep.bound;
      row.tau = tau;
      row.bound_exact = rep.exact;
    }
  }
  if (!std::isfinite(row.bound)) {
    const auto rep = main_upper_bound(positive_partitions(h, row.tau_h), px, am, bm, mix_seed({sc.seed, i, kPointsTag}));
    row.bound = rep.bound;
    row.tau = row.tau_h;
    row.bound_exact = rep.exact;
  }

  const auto pipeline = two_stage(h, cfg);
  const auto d = paired_risk_difference(pipeline, psi_of(h), h, px, sc.mc_points, mix_seed({sc.seed, i, kPointsTag}));
  row.delta = d.value;
  row.delta_se = d.std_error;
  return row;
}

InexactRow inexact_instance(const Scenario& sc, std::size_t i) {
  Rng prng(mix_seed({sc.seed, i, kParamsTag}));
  InexactRow row;
  row.instance = i;
  row.seed = sc.seed;
  // Gaussian tails couple neighbouring balls, so Gaussian instances are
  // drawn with small scales and pushed apart until they no longer interact.
  const bool gaussian = sc.mixed_noise ? (i % 5 == 4) : sc.family == NoiseFamily::GaussianIso;
  row.family = gaussian ? NoiseFamily::GaussianIso : NoiseFamily::UniformBall;
  const double scale_hi = gaussian ? 2.0 : 4.0;
  row.alpha = between(prng, 0.5, scale_hi);
  row.beta = between(prng, 0.5, scale_hi);
  row.radius = between(prng, 5.0, 12.0);
  row.tau_h = between(prng, 0.05, 0.45);
  row.eta = sc.etas[i % sc.etas.size()];
  const double top = std::max(row.alpha, row.beta);
  row.zeta = 2.0 * top + between(prng, 0.5, 5.0);

  SmoothingConfig cfg;
  cfg.family = row.family;
  cfg.alpha = row.alpha;
  cfg.beta = row.beta;
  cfg.mode = EvalMode::MonteCarlo;
  cfg.mc_samples = sc.mc_votes;
  cfg.seed = mix_seed({sc.seed, i, kVotesTag});
  const std::size_t d = sc.domain.dim();
  const auto am = cfg.alpha_model(d);
  const auto bm = cfg.beta_model(d);
  if (gaussian) {
    const auto widest = row.alpha >= row.beta ? am : bm;
    constexpr std::size_t kCountCap = 64;
    while (!noninteracting(row.zeta, widest, kCountCap)) row.zeta += 1.0;
  }

  const BallUnionConditional h = sample_sphere_config(sc.domain, row.zeta, row.radius, sc.attempts,
                                                      mix_seed({sc.seed, i, kSpheresTag}), row.tau_h);
  row.spheres = h.balls().size();
  const auto px = DataMeasure::uniform_box(sc.domain.lo, sc.domain.hi);

  SoftOptions so;
  so.tabulate = true;
  const SoftConditional base = soft_convolve(h, am, so);
  const PerturbedClassifier g = PerturbedClassifier::seeded([base](PointView x) { return base(x); }, d, row.eta,
                                                            mix_seed({sc.seed, i, kBumpsTag}), h.balls(),
                                                            row.alpha + row.beta);
  std::vector<Ball> support;
  for (std::size_t j = 0; j < h.balls().size(); ++j) support.push_back(Ball{h.balls()[j].center, base.ball_reach(j)});
  const HardClassifier psi_g([g](PointView x) { return psi(g(x)); }, d, {}, std::move(support));
  const HardClassifier pipeline = smooth(psi_g, bm, cfg);

  const auto diff = paired_risk_difference(pipeline, psi_of(h), h, px, sc.mc_points, mix_seed({sc.seed, i, kPointsTag}));
  row.delta = diff.value;
  row.delta_se = diff.std_error;
  row.bounds = inexact_risk_bounds(h, px, am, bm, row.eta);
  const double delta_h = closed_form_excess(h, px, am, bm).value;
  row.general = general_g_bound(h, g, px, am, delta_h, sc.mc_points, mix_seed({sc.seed, i, kDisagreeTag}));
  return row;
}

template <typename Row, typename Fn>
ValidationResult<Row> run_instances(const Scenario& sc, std::size_t jobs, Fn make) {
  std::vector<std::optional<Row>> rows(sc.instances);
  const auto errors = parallel_for(sc.instances, jobs, [&](std::size_t i) { rows[i] = make(sc, i); });
  ValidationResult<Row> res;
  for (std::size_t i = 0; i < sc.instances; ++i) {
    if (!errors[i].empty()) {
      res.failures.push_back({i, errors[i]});
    } else {
      res.rows.push_back(*rows[i]);
    }
  }
  return res;
}

std::string_view case_name(InexactCase c) {
  switch (c) {
    case InexactCase::A: return "A";
    case InexactCase::B: return "B";
    case InexactCase::Mixed: return "mixed";
  }
  return "A";
}

}  // namespace

bool InexactRow::sandwich_ok() const {
  return delta >= bounds.lower - kSandwichSigmas * delta_se && delta <= bounds.upper + kSandwichSigmas * delta_se;
}

bool InexactRow::general_ok() const {
  const double se = std::hypot(delta_se, general.std_error);
  return delta - kSandwichSigmas * se <= general.bound;
}

BoundValidationResult run_bound_validation(const Scenario& sc, std::size_t jobs) {
  detail::require(sc.kind == ScenarioKind::BoundValidation, "run_bound_validation: scenario must be a BoundValidation");
  sc.validate();
  auto res = run_instances<BoundRow>(sc, jobs, bound_instance);
  res.violations = static_cast<std::size_t>(
      std::count_if(res.rows.begin(), res.rows.end(), [](const BoundRow& r) { return r.violation(); }));
  return res;
}

InexactValidationResult run_inexact_validation(const Scenario& sc, std::size_t jobs) {
  detail::require(sc.kind == ScenarioKind::InexactLearning, "run_inexact_validation: scenario must be InexactLearning");
  sc.validate();
  auto res = run_instances<InexactRow>(sc, jobs, inexact_instance);
  res.violations = static_cast<std::size_t>(std::count_if(
      res.rows.begin(), res.rows.end(), [](const InexactRow& r) { return !r.sandwich_ok() || !r.general_ok(); }));
  return res;
}

CsvTable bound_csv(const Scenario& sc, const BoundValidationResult& res) {
  CsvTable t({"instance", "family", "zeta", "zeta_actual", "radius", "spheres", "tau_h", "tau", "alpha", "beta",
              "delta", "delta_se", "bound", "margin", "violation", "bound_exact", "seed", "mode", "mc_samples",
              "mc_votes"});
  for (const auto& r : res.rows) {
    t.row()
        .add(r.instance)
        .add(to_string(r.family))
        .add(r.zeta)
        .add(r.zeta_actual)
        .add(r.radius)
        .add(r.spheres)
        .add(r.tau_h)
        .add(r.tau)
        .add(r.alpha)
        .add(r.beta)
        .add(r.delta)
        .add(r.delta_se)
        .add(r.bound)
        .add(r.margin())
        .add(r.violation())
        .add(r.bound_exact)
        .add(static_cast<std::uint64_t>(r.seed))
        .add(std::string_view("mc"))
        .add(sc.mc_points)
        .add(sc.mc_votes);
  }
  return t;
}

CsvTable inexact_csv(const Scenario& sc, const InexactValidationResult& res) {
  CsvTable t({"instance", "family", "zeta", "radius", "spheres", "tau_h", "alpha", "beta", "eta", "delta", "delta_se",
              "lower", "upper", "case", "sandwich_ok", "general_bound", "disagreement", "general_ok", "seed", "mode",
              "mc_samples", "mc_votes"});
  for (const auto& r : res.rows) {
    t.row()
        .add(r.instance)
        .add(to_string(r.family))
        .add(r.zeta)
        .add(r.radius)
        .add(r.spheres)
        .add(r.tau_h)
        .add(r.alpha)
        .add(r.beta)
        .add(r.eta)
        .add(r.delta)
        .add(r.delta_se)
        .add(r.bounds.lower)
        .add(r.bounds.upper)
        .add(case_name(r.bounds.which))
        .add(r.sandwich_ok())
        .add(r.general.bound)
        .add(r.general.disagreement)
        .add(r.general_ok())
        .add(static_cast<std::uint64_t>(r.seed))
        .add(std::string_view("mc"))
        .add(sc.mc_points)
        .add(sc.mc_votes);
  }
  return t;
}

std::string bound_svg(const BoundValidationResult& res) {
  SvgSeries delta{"excess risk (MC)", {}, {}, false};
  SvgSeries bound{"upper bound", {}, {}, true};
  for (const auto& r : res.rows) {
    delta.x.push_back(static_cast<double>(r.instance));
    delta.y.push_back(r.delta);
    bound.x.push_back(static_cast<double>(r.instance));
    bound.y.push_back(r.bound);
  }
  return render_svg({SvgPanel{"bound validation", {delta, bound}}}, "instance", "excess risk");
}

std::string inexact_svg(const InexactValidationResult& res) {
  SvgSeries lower{"lower bound", {}, {}, true};
  SvgSeries delta{"excess risk (MC)", {}, {}, false};
  SvgSeries upper{"upper bound", {}, {}, true};
  for (const auto& r : res.rows) {
    const auto x = static_cast<double>(r.instance);
    lower.x.push_back(x);
    lower.y.push_back(r.bounds.lower);
    delta.x.push_back(x);
    delta.y.push_back(r.delta);
    upper.x.push_back(x);
    upper.y.push_back(r.bounds.upper);
  }
  return render_svg({SvgPanel{"perturbed classifiers", {lower, delta, upper}}}, "instance", "excess risk");
}

}  // namespace smoothlab::harness
