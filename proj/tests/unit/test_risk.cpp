#include <doctest.h>

#include <cmath>
#include <numbers>

#include "smoothlab/errors.hpp"
#include "smoothlab/risk.hpp"
#include "smoothlab/rng.hpp"

using namespace smoothlab;

namespace {

SmoothingConfig config(NoiseFamily f, double a, double b, EvalMode mode = EvalMode::Exact) {
  SmoothingConfig c;
  c.family = f;
  c.alpha = a;
  c.beta = b;
  c.mode = mode;
  return c;
}

const Piecewise1DConditional kThreeIntervals({-0.25, -0.02, 0.02, 0.25}, {1.0, 0.0, 1.0});

}  // namespace

TEST_SUITE("risk") {
  TEST_CASE("region mass") {
    const auto px = DataMeasure::uniform_box({0.0, 0.0}, {100.0, 100.0});
    const std::vector<Ball> one{{{50.0, 50.0}, 10.0}};
    const auto m = region_mass(px, one);
    CHECK(m.exact);
    CHECK(m.value == doctest::Approx(std::numbers::pi * 100.0 / 1e4).epsilon(1e-12));
    CHECK(region_mass(px, std::vector<Ball>{}).value == 0.0);
    CHECK(region_mass(px, Box{{0.0, 0.0}, {100.0, 100.0}}).value == doctest::Approx(1.0));
    CHECK(region_mass(px, std::vector<Ball>{{{50.0, 50.0}, 200.0}}).value == doctest::Approx(1.0));

    const auto line = DataMeasure::uniform_box({-10.0}, {10.0});
    CHECK(region_mass(line, IntervalSet({{-11.0, -9.0}, {0.0, 1.0}})).value == doctest::Approx(0.1));
  }

  TEST_CASE("region mass of a clipped ball is flagged and estimated") {
    const auto px = DataMeasure::uniform_box({0.0, 0.0}, {10.0, 10.0});
    const std::vector<Ball> corner{{{0.0, 0.0}, 4.0}};
    const auto m = region_mass(px, corner, 5);
    CHECK_FALSE(m.exact);
    const double truth = std::numbers::pi * 16.0 / 4.0 / 100.0;
    CHECK(std::abs(m.value - truth) < 4.0 * std::sqrt(truth * (1.0 - truth) / kRegionMassSamples));
  }

  TEST_CASE("mixture measures") {
    const auto px = DataMeasure::uniform_on_regions({Box{{0.0}, {1.0}}, Box{{2.0}, {5.0}}});
    CHECK(px.density(std::vector<double>{0.5}) == doctest::Approx(0.25));
    CHECK(region_mass(px, IntervalSet({{0.0, 1.0}})).value == doctest::Approx(0.25));
    CHECK_THROWS_AS(DataMeasure::mixture({{0.3, Box{{0.0}, {1.0}}}, {0.3, Box{{2.0}, {3.0}}}}), InvalidArgument);
    const auto ballmix = DataMeasure::mixture({{1.0, Ball{{0.0, 0.0}, 2.0}}});
    CHECK(region_mass(ballmix, std::vector<Ball>{{{1.0, 0.0}, 1.0}}).value ==
          doctest::Approx(std::numbers::pi / (4.0 * std::numbers::pi)));
  }

  TEST_CASE("Bayes classifier of a noiseless label has zero risk") {
    const Piecewise1DConditional h({0.0, 1.0, 2.0}, {1.0, 0.0});
    const auto px = DataMeasure::uniform_box({-1.0}, {3.0});
    CHECK(risk(psi_of(h), h, px).value == doctest::Approx(0.0));
  }

  TEST_CASE("ball-union Bayes risk") {
    const BallUnionConditional h({{{30.0, 30.0}, 10.0}, {{70.0, 60.0}, 8.0}}, 0.15);
    const auto px = DataMeasure::uniform_box({0.0, 0.0}, {100.0, 100.0});
    const double mass = std::numbers::pi * (100.0 + 64.0) / 1e4;
    const auto exact = risk(psi_of(h), h, px);
    CHECK(exact.value == doctest::Approx(0.35 * mass).epsilon(1e-12));
    RiskOptions opt;
    opt.mode = EvalMode::MonteCarlo;
    opt.mc_samples = 200000;
    opt.seed = 2;
    const auto mc = risk(psi_of(h), h, px, opt);
    CHECK(mc.ci_low <= exact.value);
    CHECK(exact.value <= mc.ci_high);
  }

  TEST_CASE("three-interval risks") {
    const auto px = DataMeasure::uniform_box({-0.25}, {0.25});
    CHECK(risk(HardClassifier::constant(0, 1), kThreeIntervals, px).value == doctest::Approx(0.92).epsilon(1e-12));
    const auto plain = excess_risk(kThreeIntervals, px, config(NoiseFamily::UniformBall, 0.0, 0.465));
    const auto aug = excess_risk(kThreeIntervals, px, config(NoiseFamily::UniformBall, 0.05, 0.465));
    CHECK(plain.value == doctest::Approx(0.92).epsilon(1e-12));
    CHECK(aug.value == doctest::Approx(0.08).epsilon(1e-12));
    CHECK(excess_risk(kThreeIntervals, px, config(NoiseFamily::UniformBall, 0.0, 0.0)).value == 0.0);
  }

  TEST_CASE("closed form excess") {
    const BallUnionConditional h({{{-5.0}, 1.0}, {{5.0}, 1.0}}, 0.1);
    const auto px = DataMeasure::uniform_box({-10.0}, {10.0});
    const NoiseModel m(NoiseFamily::UniformBall, 0.2, 1);
    const auto zero = closed_form_excess(h, px, std::nullopt, std::nullopt);
    CHECK(zero.value == doctest::Approx(0.0).scale(1.0));
    const auto cf = closed_form_excess(h, px, m, m);
    const double shrunk = 13.0 / 15.0;
    const double expected = 0.6 * 0.2 - 0.2 * (2.0 * 2.0 * shrunk / 20.0) - 0.4 * 0.2;
    CHECK(cf.value == doctest::Approx(expected).epsilon(1e-9));
    CHECK_FALSE(cf.approximate);
  }

  TEST_CASE("closed form is monotone in alpha") {
    Rng rng(10);
    const auto px = DataMeasure::uniform_box({0.0, 0.0}, {60.0, 60.0});
    for (int rep = 0; rep < 20; ++rep) {
      const BallUnionConditional h({{{15.0, 15.0}, 5.0 + 5.0 * rng.uniform()}, {{45.0, 40.0}, 5.0 + 5.0 * rng.uniform()}},
                                   0.05 + 0.4 * rng.uniform());
      const auto fam = rng.uniform() < 0.5 ? NoiseFamily::UniformBall : NoiseFamily::GaussianIso;
      const double beta = 3.0 * rng.uniform();
      double prev = -1.0;
      for (double a = 0.0; a <= 4.0; a += 0.5) {
        const auto cfg = config(fam, a, beta);
        const double v = closed_form_excess(h, px, cfg.alpha_model(2), cfg.beta_model(2)).value;
        CHECK(v >= prev - 1e-12);
        prev = v;
      }
    }
  }

  TEST_CASE("exact pipeline matches the closed form for separated balls") {
    const BallUnionConditional h({{{20.0, 20.0}, 8.0}, {{60.0, 55.0}, 6.0}}, 0.2);
    const auto px = DataMeasure::uniform_box({0.0, 0.0}, {100.0, 100.0});
    for (auto fam : {NoiseFamily::UniformBall, NoiseFamily::GaussianIso}) {
      const auto cfg = config(fam, 1.5, 1.0);
      const double pipeline = excess_risk(h, px, cfg).value;
      const double closed = closed_form_excess(h, px, cfg.alpha_model(2), cfg.beta_model(2)).value;
      CHECK(pipeline == doctest::Approx(closed).epsilon(1e-9).scale(1.0));
    }
  }

  TEST_CASE("paired Monte-Carlo excess risk covers the exact value") {
    const BallUnionConditional h({{{20.0, 20.0}, 8.0}, {{60.0, 55.0}, 6.0}}, 0.2);
    const auto px = DataMeasure::uniform_box({0.0, 0.0}, {100.0, 100.0});
    auto cfg = config(NoiseFamily::UniformBall, 2.0, 1.5);
    const double exact = excess_risk(h, px, cfg).value;
    cfg.mode = EvalMode::MonteCarlo;
    cfg.mc_samples = 400;
    cfg.seed = 4;
    const auto mc = excess_risk(h, px, cfg, 40000);
    CHECK(std::abs(mc.value - exact) < 4.0 * mc.std_error + 1e-3);
  }

  TEST_CASE("empirical delta") {
    const BallUnionConditional h({{{20.0, 20.0}, 10.0}, {{60.0, 60.0}, 10.0}}, 0.3);
    const auto px = DataMeasure::uniform_box({0.0, 0.0}, {100.0, 100.0});
    const auto f = psi_of(h);
    auto pts = sample_labeled(h, px, 10000, 5);
    const double emp = empirical_delta(f, pts);
    const double truth = risk(f, h, px).value;
    CHECK(std::abs(emp - truth) < 3.0 * std::sqrt(truth * (1.0 - truth) / 10000.0));

    for (auto& p : pts) p.y = f(p.x);
    CHECK(empirical_delta(f, pts) == 0.0);
    for (auto& p : pts) p.y = 1 - p.y;
    CHECK(empirical_delta(f, pts) == 1.0);
    CHECK_THROWS_AS(empirical_delta(f, std::vector<LabeledPoint>{}), InvalidArgument);
  }

  TEST_CASE("pointwise loss") {
    CHECK(pointwise_loss(1, 0.7) == doctest::Approx(0.3));
    CHECK(pointwise_loss(0, 0.7) == doctest::Approx(0.7));
  }
}
