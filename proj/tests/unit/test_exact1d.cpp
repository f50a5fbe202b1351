#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "smoothlab/errors.hpp"
#include "smoothlab/exact1d.hpp"

using namespace smoothlab;

namespace {

/// (f ∗ p)(x) by quadrature of f against the noise density, one smooth piece at a time.
double convolve_numeric(const PiecewiseConstant& f, const NoiseModel& m, double x) {
  const double lim = m.family() == NoiseFamily::UniformBall ? m.scale() : 12.0 * m.scale();
  double total = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    // f(x − v) equals values[i] for v in (x − b_{i+1}, x − b_i].
    const double lo = std::max(-lim, x - f.breaks[i + 1]);
    const double hi = std::min(lim, x - f.breaks[i]);
    if (hi <= lo) continue;
    total += f.values[i] * oracle::simpson(
                               [&](double v) {
                                 const double p[] = {v};
                                 return pdf(m, p);
                               },
                               lo, hi, 2000);
  }
  return total;
}

}  // namespace

TEST_SUITE("exact1d") {
  TEST_CASE("piecewise constant evaluation and antiderivative") {
    const PiecewiseConstant f{{0.0, 1.0, 3.0}, {0.5, 1.0}};
    CHECK(f(-0.1) == 0.0);
    CHECK(f(0.5) == 0.5);
    CHECK(f(2.0) == 1.0);
    CHECK(f(3.5) == 0.0);
    CHECK(f.antiderivative(-1.0) == 0.0);
    CHECK(f.antiderivative(2.0) == doctest::Approx(1.5));
    CHECK(f.antiderivative(10.0) == doctest::Approx(2.5));
  }

  TEST_CASE("superlevel sets of step functions") {
    const PiecewiseConstant f{{0.0, 1.0, 2.0, 4.0}, {0.7, 0.2, 0.9}};
    const auto s = superlevel_set(f, 0.5);
    REQUIRE(s.parts().size() == 2);
    CHECK(s.parts()[0].hi == 1.0);
    CHECK(s.parts()[1].lo == 2.0);
    CHECK_THROWS_AS(superlevel_set(f, 0.0), InvalidArgument);
  }

  TEST_CASE("uniform convolution matches quadrature") {
    const PiecewiseConstant f{{-0.25, -0.02, 0.02, 0.25}, {1.0, 0.0, 1.0}};
    const NoiseModel m(NoiseFamily::UniformBall, 0.05, 1);
    const Convolved1D c(f, m);
    for (double x : {-0.3, -0.27, -0.25, -0.1, -0.03, 0.0, 0.01, 0.2, 0.26, 0.31}) {
      CHECK(c(x) == doctest::Approx(convolve_numeric(f, m, x)).epsilon(1e-6).scale(1.0));
    }
    CHECK(c(0.0) == doctest::Approx(0.6));
  }

  TEST_CASE("Gaussian convolution matches quadrature") {
    const PiecewiseConstant f{{-1.0, 0.0, 0.5, 2.0}, {0.8, 0.1, 1.0}};
    const NoiseModel m(NoiseFamily::GaussianIso, 0.3, 1);
    const Convolved1D c(f, m);
    for (double x : {-2.0, -1.0, -0.4, 0.0, 0.25, 0.5, 1.7, 2.6}) {
      CHECK(c(x) == doctest::Approx(convolve_numeric(f, m, x)).epsilon(1e-7).scale(1.0));
    }
  }

  TEST_CASE("thresholding a convolved indicator") {
    // Uniform window of half-width 0.4 on [−1, 1]: the level-0.5 set is [−1, 1] itself.
    const PiecewiseConstant f{{-1.0, 1.0}, {1.0}};
    const Convolved1D c(f, NoiseModel(NoiseFamily::UniformBall, 0.4, 1));
    const auto s = c.superlevel_set(0.5);
    REQUIRE(s.parts().size() == 1);
    CHECK(s.parts()[0].lo == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(s.parts()[0].hi == doctest::Approx(1.0).epsilon(1e-12));

    // Gaussian: the level-0.8 set of a wide box, checked against the quantile oracle.
    const Convolved1D g(f, NoiseModel(NoiseFamily::GaussianIso, 0.1, 1));
    const auto t = g.superlevel_set(0.8);
    REQUIRE(t.parts().size() == 1);
    const double edge = 1.0 + 0.1 * oracle::normal_quantile(0.2);
    CHECK(t.parts()[0].hi == doctest::Approx(edge).epsilon(1e-9));
  }
}
