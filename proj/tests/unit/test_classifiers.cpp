#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "oracles.hpp"
#include "smoothlab/classifiers.hpp"
#include "smoothlab/errors.hpp"
#include "smoothlab/rng.hpp"

using namespace smoothlab;

TEST_SUITE("classifiers") {
  TEST_CASE("psi thresholds at one half with ties mapped to one") {
    CHECK(psi(0.5) == 1);
    CHECK(psi(0.4999) == 0);
    CHECK(psi(1.0) == 1);
    CHECK(psi(0.0) == 0);
  }

  TEST_CASE("ball union conditional") {
    const BallUnionConditional h({{{0.0, 0.0}, 1.0}, {{4.0, 0.0}, 1.0}}, 0.2);
    const double in[] = {0.5, 0.5};
    const double edge[] = {5.0, 0.0};
    const double out[] = {2.0, 0.0};
    CHECK(h(in) == doctest::Approx(0.7));
    CHECK(h(edge) == doctest::Approx(0.7));
    CHECK(h(out) == 0.0);
    CHECK_THROWS_AS(BallUnionConditional({{{0.0}, 1.0}}, 0.5), InvalidArgument);
    CHECK_THROWS_AS(BallUnionConditional({{{0.0}, 1.0}, {{1.5}, 1.0}}, 0.1), InvalidArgument);
  }

  TEST_CASE("interference distances") {
    const BallUnionConditional two({{{0.0, 0.0}, 1.0}, {{4.0, 0.0}, 1.0}}, 0.1);
    CHECK(lower_interference_distance(two) == doctest::Approx(2.0));
    CHECK(upper_interference_distance(two) == doctest::Approx(2.0));

    Rng rng(4);
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<Ball> balls;
      while (balls.size() < 3) {
        Ball b{{20.0 * rng.uniform(), 20.0 * rng.uniform()}, 0.5 + rng.uniform()};
        bool ok = true;
        for (const auto& o : balls) ok = ok && distance(o.center, b.center) > o.radius + b.radius + 0.01;
        if (ok) balls.push_back(b);
      }
      double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = i + 1; j < 3; ++j) {
          const double g = distance(balls[i].center, balls[j].center) - balls[i].radius - balls[j].radius;
          lo = std::min(lo, g);
          hi = std::max(hi, g);
        }
      }
      const BallUnionConditional h(balls, 0.1);
      CHECK(lower_interference_distance(h) == doctest::Approx(lo));
      CHECK(upper_interference_distance(h) == doctest::Approx(hi));
    }
    // The three-interval construction with ω = 0.23 has a middle gap of 0.04.
    const double w = 0.23;
    const BallUnionConditional intervals({{{-0.25 + w / 2}, w / 2}, {{0.25 - w / 2}, w / 2}}, 0.1);
    CHECK(upper_interference_distance(intervals) == doctest::Approx(0.04));
    CHECK_THROWS_AS(lower_interference_distance(BallUnionConditional({{{0.0}, 1.0}}, 0.1)), InvalidArgument);
  }

  TEST_CASE("soft convolution examples") {
    const BallUnionConditional h1({{{0.0}, 1.0}}, 0.1);
    const double center[] = {0.0};
    const auto s = soft_convolve(h1, NoiseModel(NoiseFamily::UniformBall, 0.2, 1));
    CHECK(s(center) == doctest::Approx(0.6));

    const BallUnionConditional h2({{{0.0, 0.0}, 2.0}, {{7.0, 1.0}, 1.5}}, 0.3);
    const auto tiny = soft_convolve(h2, NoiseModel(NoiseFamily::GaussianIso, 1e-9, 2));
    for (const auto& p : std::vector<Point>{{0.1, 0.2}, {1.0, -1.2}, {7.5, 1.2}, {4.0, 0.0}, {-3.0, 3.0}}) {
      CHECK(tiny(p) == doctest::Approx(h2(p)));
    }
  }

  TEST_CASE("soft convolution of the three-interval conditional") {
    const Piecewise1DConditional h({-0.25, -0.02, 0.02, 0.25}, {1.0, 0.0, 1.0});
    const NoiseModel m(NoiseFamily::UniformBall, 0.05, 1);
    const auto s = soft_convolve(h, m);
    for (double x : {0.0, 0.015, -0.24, 0.26}) {
      const double quad = oracle::simpson([&](double v) { return h(x - v) / 0.1; }, -0.05, 0.05, 400000);
      const double p[] = {x};
      CHECK(s(p) == doctest::Approx(quad).epsilon(1e-6).scale(1.0));
    }
  }

  TEST_CASE("exact, tabulated and Monte-Carlo convolutions agree") {
    const BallUnionConditional h({{{0.0, 0.0}, 2.0}, {{5.0, 0.0}, 1.0}}, 0.25);
    const NoiseModel m(NoiseFamily::GaussianIso, 0.8, 2);
    const auto exact = soft_convolve(h, m);
    SoftOptions tab;
    tab.tabulate = true;
    const auto tabulated = soft_convolve(h, m, tab);
    SoftOptions mc;
    mc.mc_samples = 20000;
    mc.seed = 3;
    const GenericConditional generic{[&h](PointView x) { return h(x); }, 2};
    const auto sampled = soft_convolve(generic, m, mc);
    CHECK(exact.exact());
    CHECK_FALSE(tabulated.exact());
    CHECK_FALSE(sampled.exact());
    for (const auto& p : std::vector<Point>{{0.0, 0.0}, {1.9, 0.3}, {3.5, 0.0}, {5.2, -0.4}, {-4.0, 1.0}}) {
      const double e = exact(p);
      CHECK(tabulated(p) == doctest::Approx(e).epsilon(1e-6).scale(1.0));
      // Values lie in [0, 0.75]; the MC estimate of a mean has sd ≤ 0.375/√n.
      CHECK(std::abs(sampled(p) - e) < 4.0 * 0.375 / std::sqrt(20000.0));
    }
  }

  TEST_CASE("hard classifier factories") {
    const auto one = HardClassifier::constant(1, 2);
    const double x[] = {3.0, -2.0};
    CHECK(one(x) == 1);
    const auto zero = HardClassifier::constant(0, 2);
    CHECK_FALSE(zero.may_be_positive(x));

    const auto bs = HardClassifier::ball_set({{{0.0, 0.0}, 1.0}, {{3.0, 0.0}, 0.0}}, 2);
    const double inside[] = {0.6, 0.6};
    const double outside[] = {3.0, 0.0};
    CHECK(bs(inside) == 1);
    CHECK(bs(outside) == 0);
    CHECK(std::get<BallSetRegion>(bs.structure()).balls.size() == 1);
    CHECK_THROWS_AS(HardClassifier::ball_set({{{0.0, 0.0}, 1.0}, {{1.5, 0.0}, 1.0}}, 2), InvalidArgument);

    const auto iv = HardClassifier::intervals(IntervalSet({{0.0, 1.0}}));
    const double a[] = {1.0};
    const double b[] = {1.01};
    CHECK(iv(a) == 1);
    CHECK(iv(b) == 0);

    const BallUnionConditional h({{{0.0, 0.0}, 1.0}}, 0.0);
    const auto base = psi_of(h);
    CHECK(base(inside) == 1);
    CHECK(base(outside) == 0);
  }

  TEST_CASE("perturbed classifiers stay within eta of the base") {
    const BallUnionConditional h({{{0.0, 0.0}, 3.0}, {{10.0, 0.0}, 2.0}}, 0.2);
    const auto soft = soft_convolve(h, NoiseModel(NoiseFamily::UniformBall, 1.0, 2));
    const ConditionalFn base = [soft](PointView p) { return soft(p); };
    const auto g = PerturbedClassifier::seeded(base, 2, 0.1, 17, h.balls(), 2.0);
    const auto g2 = PerturbedClassifier::seeded(base, 2, 0.1, 17, h.balls(), 2.0);
    Rng rng(6);
    bool moved = false;
    for (int i = 0; i < 2000; ++i) {
      const Point p{-5.0 + 20.0 * rng.uniform(), -6.0 + 12.0 * rng.uniform()};
      const double v = g(p);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      CHECK(std::abs(v - base(p)) <= 0.1 + 1e-15);
      CHECK(v == g2(p));
      moved = moved || std::abs(v - base(p)) > 1e-6;
    }
    CHECK(moved);

    const auto shifted = PerturbedClassifier::constant_shift(base, 2, 0.05);
    const double far[] = {50.0, 50.0};
    CHECK(shifted(far) == doctest::Approx(0.05));
  }
}
