#include "smoothlab/harness/construction1d.hpp"

#include "smoothlab/errors.hpp"
#include "smoothlab/risk.hpp"
#include "smoothlab/smoothing.hpp"

namespace smoothlab::harness {

namespace {

constexpr double kTol = 1e-12;
constexpr double kLeft = -0.25;
constexpr double kRight = 0.25;

struct Outcome {
  IntervalSet unaugmented;
  IntervalSet stage;
  IntervalSet augmented;
  double risk_unaugmented = 0.0;
  double risk_augmented = 0.0;
};

const IntervalSet& as_intervals(const HardClassifier& f) {
  const auto* iv = std::get_if<IntervalSet>(&f.structure());
  if (!iv) throw UnsupportedOperation("1D construction: expected an interval classifier");
  return *iv;
}

Outcome evaluate_construction(double c2, double c3, double alpha, double beta) {
  const Piecewise1DConditional h({kLeft, c2, c3, kRight}, {1.0, 0.0, 1.0});
  const auto px = DataMeasure::uniform_box({kLeft}, {kRight});
  SmoothingConfig cfg;
  cfg.family = NoiseFamily::UniformBall;
  cfg.alpha = 0.5 * alpha;
  cfg.beta = 0.5 * beta;
  cfg.mode = EvalMode::Exact;

  SmoothingConfig plain = cfg;
  plain.alpha = 0.0;
  const HardClassifier unaug = two_stage(h, plain);
  const HardClassifier stage = threshold(soft_convolve(h, cfg.alpha_model(1)), cfg);
  const HardClassifier aug = smooth(stage, cfg.beta_model(1), cfg);

  Outcome o;
  o.unaugmented = as_intervals(unaug);
  o.stage = as_intervals(stage);
  o.augmented = as_intervals(aug);
  o.risk_unaugmented = risk(unaug, h, px).value;
  o.risk_augmented = risk(aug, h, px).value;
  return o;
}

std::string describe(const IntervalSet& s) {
  if (s.empty()) return "{}";
  std::string out;
  for (const auto& p : s.parts()) {
    if (!out.empty()) out += " u ";
    out += "[" + format_number(p.lo) + ", " + format_number(p.hi) + "]";
  }
  return out;
}

}  // namespace

bool Construction1DVerdict::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::vector<std::string> Construction1DVerdict::failed() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c.name);
  }
  return out;
}

Construction1DVerdict verify_1d_construction(double omega, double alpha, double beta,
                                             std::optional<double> widened_gap) {
  detail::require(omega > 0.0 && omega <= 0.25, "verify_1d_construction: omega must lie in (0, 0.25]");
  detail::require(alpha > 0.0 && beta > 0.0, "verify_1d_construction: alpha and beta must be positive");
  const double gap = widened_gap.value_or(alpha);
  detail::require(gap > 0.0 && gap < kRight - kLeft, "verify_1d_construction: widened gap must lie in (0, 0.5)");

  Construction1DVerdict v;
  v.omega = omega;
  v.alpha = alpha;
  v.beta = beta;
  v.widened_gap = gap;
  auto check = [&v](std::string name, bool ok, std::string detail) {
    v.checks.push_back({std::move(name), ok, std::move(detail)});
  };

  check("beta >= 4*omega", beta >= 4.0 * omega, format_number(beta) + " vs " + format_number(4.0 * omega));
  check("alpha >= 4*(0.25-omega)", alpha >= 4.0 * (0.25 - omega),
        format_number(alpha) + " vs " + format_number(4.0 * (0.25 - omega)));
  check("alpha <= 2*omega", alpha <= 2.0 * omega, format_number(alpha) + " vs " + format_number(2.0 * omega));
  check("beta <= 1", beta <= 1.0, format_number(beta));
  check("omega > 0.125", omega > 0.125, format_number(omega));

  const double c2 = kLeft + omega;
  const double c3 = kRight - omega;
  const auto base = evaluate_construction(c2, c3, alpha, beta);
  v.risk_unaugmented = base.risk_unaugmented;
  v.risk_augmented = base.risk_augmented;
  check("unaugmented pipeline predicts 0", base.unaugmented.total_length() <= kTol, describe(base.unaugmented));
  check("augmented base predicts 1 on [c1,c4]", base.stage.covers(kLeft, kRight, kTol), describe(base.stage));
  check("smoothed augmented pipeline predicts 1 on [c1,c4]", base.augmented.covers(kLeft, kRight, kTol),
        describe(base.augmented));
  check("augmentation lowers risk", base.risk_augmented < base.risk_unaugmented,
        format_number(base.risk_augmented) + " < " + format_number(base.risk_unaugmented));

  const double mid = 0.5 * (kLeft + kRight);
  const auto wide = evaluate_construction(mid - 0.5 * gap, mid + 0.5 * gap, alpha, beta);
  v.widened_risk_unaugmented = wide.risk_unaugmented;
  v.widened_risk_augmented = wide.risk_augmented;
  check("widened gap: augmentation does not help", gap > 0.5 * alpha && wide.risk_augmented >= wide.risk_unaugmented - kTol,
        "gap " + format_number(gap) + ", " + format_number(wide.risk_augmented) +
            " >= " + format_number(wide.risk_unaugmented));
  return v;
}

CsvTable construction_csv(const Construction1DVerdict& v) {
  CsvTable t({"check", "passed", "detail", "omega", "alpha", "beta", "seed", "mode", "mc_samples"});
  auto row = [&](std::string_view name, bool ok, std::string_view detail) {
    t.row().add(name).add(ok).add(detail).add(v.omega).add(v.alpha).add(v.beta).add(std::uint64_t{0}).add(
        std::string_view("exact")).add(std::size_t{0});
  };
  for (const auto& c : v.checks) row(c.name, c.passed, c.detail);
  row("risk unaugmented", true, format_number(v.risk_unaugmented));
  row("risk augmented", true, format_number(v.risk_augmented));
  row("widened risk unaugmented", true, format_number(v.widened_risk_unaugmented));
  row("widened risk augmented", true, format_number(v.widened_risk_augmented));
  return t;
}

}  // namespace smoothlab::harness
