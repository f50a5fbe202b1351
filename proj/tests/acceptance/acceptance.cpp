#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "smoothlab/bounds.hpp"
#include "smoothlab/harness/construction1d.hpp"
#include "smoothlab/harness/runner.hpp"
#include "smoothlab/harness/scenario.hpp"
#include "smoothlab/harness/sweep.hpp"
#include "smoothlab/harness/validation.hpp"
#include "smoothlab/noise_models.hpp"
#include "smoothlab/risk.hpp"
#include "smoothlab/rng.hpp"
#include "smoothlab/smoothing.hpp"

using namespace smoothlab;
using namespace smoothlab::harness;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::filesystem::path scenario_path(const char* file) { return std::filesystem::path(SMOOTHLAB_SCENARIO_DIR) / file; }

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Quantile by bisection on the erfc-based CDF, independent of the library.
double normal_quantile(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 300; ++i) {
    const double mid = 0.5 * (lo + hi);
    (normal_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Non-overlapping balls in [0,100]^2 with pairwise gaps above zeta, kept inside the box.
std::vector<Ball> random_balls(Rng& rng, double zeta, std::size_t want) {
  std::vector<Ball> balls;
  for (int attempt = 0; attempt < 5000 && balls.size() < want; ++attempt) {
    const double r = 5.0 + 10.0 * rng.uniform();
    Ball b{{r + (100.0 - 2.0 * r) * rng.uniform(), r + (100.0 - 2.0 * r) * rng.uniform()}, r};
    bool ok = true;
    for (const auto& o : balls) ok = ok && distance(o.center, b.center) - o.radius - b.radius > zeta;
    if (ok) balls.push_back(std::move(b));
  }
  return balls;
}

Verdict criterion_ordering() {
  const auto t0 = Clock::now();
  Rng rng(101);
  const auto px = DataMeasure::uniform_box({0.0, 0.0}, {100.0, 100.0});
  Verdict v;
  double worst_gap = 0.0, min_gain = 1.0;
  for (int i = 0; i < 20; ++i) {
    const bool gauss = i % 2 == 1;
    const double zeta = gauss ? 30.0 + 10.0 * rng.uniform() : 3.0 + 12.0 * rng.uniform();
    const auto balls = random_balls(rng, zeta, 3);
    const double tau = 0.05 + 0.4 * rng.uniform();
    const BallUnionConditional h(balls, tau);
    SmoothingConfig cfg;
    cfg.family = gauss ? NoiseFamily::GaussianIso : NoiseFamily::UniformBall;
    cfg.mode = EvalMode::Exact;
    // Gaussian scales stay below zeta / 18 so the balls are non-interacting.
    const double cap = gauss ? zeta / 18.0 : std::min(zeta, 3.0);
    cfg.alpha = cap * (0.05 + 0.9 * rng.uniform());
    cfg.beta = cap * (0.05 + 0.9 * rng.uniform());
    if (!noninteracting(zeta, cfg.alpha_model(2), balls.size()) ||
        !noninteracting(zeta, cfg.beta_model(2), balls.size())) {
      v.pass = false;
      v.detail = fmt("instance %d is not in the non-interacting regime", i);
      return v;
    }
    const double with = closed_form_excess(h, px, cfg.alpha_model(2), cfg.beta_model(2)).value;
    SmoothingConfig plain = cfg;
    plain.alpha = 0.0;
    const double without = closed_form_excess(h, px, plain.alpha_model(2), plain.beta_model(2)).value;
    const double pipeline = excess_risk(h, px, cfg).value;
    min_gain = std::min(min_gain, with - without);
    worst_gap = std::max(worst_gap, std::abs(pipeline - with));
    if (!(with > without)) v.pass = false;
    if (!(std::abs(pipeline - with) <= 1e-9)) v.pass = false;
  }
  const double secs = seconds_since(t0);
  if (secs >= 60.0) v.pass = false;
  v.detail = fmt("20 instances, min closed-form gain %.3g, max |pipeline - closed form| %.3g, %.1f s", min_gain,
                 worst_gap, secs);
  return v;
}

Verdict criterion_bound_validity() {
  const auto t0 = Clock::now();
  const auto sc = load_scenario(scenario_path("bound_validation.json"));
  const auto res = run_bound_validation(sc, 1);
  const double secs = seconds_since(t0);
  double min_margin = 1.0;
  for (const auto& r : res.rows) min_margin = std::min(min_margin, r.margin());
  Verdict v;
  v.pass = res.rows.size() == 50 && res.failures.empty() && res.violations == 0 && sc.mc_points == 20000 &&
           secs < 600.0;
  v.detail = fmt("%zu instances, %zu violations, %zu failures, min margin %.4f, %.1f s", res.rows.size(),
                 res.violations, res.failures.size(), min_margin, secs);
  return v;
}

Verdict criterion_construction() {
  const auto t0 = Clock::now();
  const auto verdict = verify_1d_construction(0.23, 0.1, 0.93);
  const double secs = seconds_since(t0);
  Verdict v;
  v.pass = verdict.passed() && std::abs(verdict.risk_unaugmented - 0.92) <= 1e-9 &&
           std::abs(verdict.risk_augmented - 0.08) <= 1e-9 &&
           verdict.widened_risk_augmented >= verdict.widened_risk_unaugmented && secs < 1.0;
  v.detail = fmt("risks %.12f vs %.12f, widened %.6f vs %.6f, %zu checks failed, %.3f s", verdict.risk_unaugmented,
                 verdict.risk_augmented, verdict.widened_risk_unaugmented, verdict.widened_risk_augmented,
                 verdict.failed().size(), secs);
  return v;
}

Verdict criterion_sign_pattern() {
  const auto t0 = Clock::now();
  const auto sc = load_scenario(scenario_path("sweep.json"));
  const auto res = run_sweep(sc, 1);
  const double secs = seconds_since(t0);
  const std::size_t nz = sc.zeta.size(), nb = sc.beta_grid.size();
  const std::size_t top = static_cast<std::size_t>(std::max_element(sc.zeta.begin(), sc.zeta.end()) - sc.zeta.begin());
  const std::size_t zero = static_cast<std::size_t>(std::find(sc.zeta.begin(), sc.zeta.end(), 0.0) - sc.zeta.begin());
  Verdict v;
  bool top_solid = true, zero_dashed_high = false;
  std::string dashed;
  for (std::size_t b = 0; b < nb; ++b) {
    top_solid = top_solid && res.flag(top, b).ok && !res.flag(top, b).dashed;
    if (zero < nz && b >= nb / 2 && res.flag(zero, b).dashed) zero_dashed_high = true;
    for (std::size_t z = 0; z < nz; ++z) {
      if (res.flag(z, b).dashed) dashed += fmt(" (%g,%g)", sc.zeta[z], sc.beta_grid[b]);
    }
  }
  v.pass = res.failures.empty() && top_solid && zero_dashed_high && secs < 900.0;
  v.detail = fmt("largest zeta row solid: %s, zero row dashed in upper beta half: %s, dashed (zeta,beta):%s, %.0f s",
                 top_solid ? "yes" : "no", zero_dashed_high ? "yes" : "no", dashed.empty() ? " none" : dashed.c_str(),
                 secs);
  return v;
}

Verdict criterion_cdf() {
  const auto t0 = Clock::now();
  Rng rng(505);
  std::size_t checks = 0, bad_r = 0, bad_t = 0, bad_rot = 0, bad_inv = 0, bad_mc = 0, mc_cases = 0;
  double worst_inv = 0.0;
  auto family = [&] { return rng.uniform() < 0.5 ? NoiseFamily::GaussianIso : NoiseFamily::UniformBall; };

  for (std::size_t d = 1; d <= 3; ++d) {
    for (int i = 0; i < 1000; ++i) {
      const NoiseModel m(family(), 0.2 + 3.0 * rng.uniform(), d);
      const double r1 = 5.0 * rng.uniform(), r2 = r1 + 2.0 * rng.uniform();
      const double t = 8.0 * rng.uniform();
      if (shifted_cdf_radial(m, r2, t) < shifted_cdf_radial(m, r1, t) - 1e-12) ++bad_r;

      const double r = 0.1 + 5.0 * rng.uniform();
      const double t1 = 8.0 * rng.uniform(), t2 = t1 + 2.0 * rng.uniform();
      if (shifted_cdf_radial(m, r, t2) > shifted_cdf_radial(m, r, t1) + 1e-12) ++bad_t;

      // A random rotation of x (a random orthonormal direction of the same norm) leaves the CDF unchanged.
      Point x(d), y(d);
      double nx = 0.0, ny = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        x[k] = rng.normal();
        y[k] = rng.normal();
        nx += x[k] * x[k];
        ny += y[k] * y[k];
      }
      const double len = 6.0 * rng.uniform();
      for (std::size_t k = 0; k < d; ++k) {
        x[k] *= len / std::sqrt(nx);
        y[k] *= len / std::sqrt(ny);
      }
      if (std::abs(shifted_cdf(m, r, x) - shifted_cdf(m, r, y)) > 1e-12) ++bad_rot;
      checks += 3;
    }
  }

  for (int i = 0; i < 1000; ++i) {
    const std::size_t d = 1 + static_cast<std::size_t>(3.0 * rng.uniform());
    const auto fam = family();
    const double theta = 0.3 + 2.0 * rng.uniform();
    const double r = 0.5 + 3.0 * rng.uniform();
    const NoiseModel m(fam, theta, d);
    const double lo = fam == NoiseFamily::GaussianIso ? 0.0 : std::abs(r - theta);
    const double hi = fam == NoiseFamily::GaussianIso ? r + 2.0 * theta : r + theta;
    const double t = lo + (hi - lo) * (0.05 + 0.9 * rng.uniform());
    const double c = shifted_cdf_radial(m, r, t);
    if (c < 1e-6 || c > 1.0 - 1e-6) continue;
    const double err = std::abs(norm_inverse(m, r, c) - t);
    worst_inv = std::max(worst_inv, err);
    if (!(err < 1e-8)) ++bad_inv;
  }

  constexpr std::size_t kDraws = 20000;
  for (auto fam : {NoiseFamily::UniformBall, NoiseFamily::GaussianIso}) {
    int cases = 0;
    while (cases < 100) {
      const std::size_t d = 1 + static_cast<std::size_t>(3.0 * rng.uniform());
      const NoiseModel m(fam, 0.3 + 2.0 * rng.uniform(), d);
      const double r = 0.2 + 3.0 * rng.uniform();
      Point x(d);
      for (auto& c : x) c = 3.0 * (2.0 * rng.uniform() - 1.0);
      const double p = shifted_cdf(m, r, x);
      if (p < 0.02 || p > 0.98) continue;
      const auto z = sample(m, mix_seed({505, static_cast<std::uint64_t>(fam), mc_cases}), kDraws);
      std::size_t hit = 0;
      for (const auto& zi : z) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k) s += (x[k] - zi[k]) * (x[k] - zi[k]);
        if (std::sqrt(s) <= r) ++hit;
      }
      const double est = static_cast<double>(hit) / kDraws;
      if (std::abs(est - p) > 4.0 * std::sqrt(p * (1.0 - p) / kDraws)) ++bad_mc;
      ++cases;
      ++mc_cases;
    }
  }

  Verdict v;
  v.pass = bad_r + bad_t + bad_rot + bad_inv + bad_mc == 0;
  v.detail = fmt("%zu property checks (r-monotone %zu bad, offset-monotone %zu bad, rotation %zu bad), "
                 "inverse max err %.2g (%zu bad), exact vs MC %zu cases %zu outside 4 sigma, %.1f s",
                 checks, bad_r, bad_t, bad_rot, worst_inv, bad_inv, mc_cases, bad_mc, seconds_since(t0));
  return v;
}

Verdict criterion_sandwich() {
  const auto t0 = Clock::now();
  const auto sc = load_scenario(scenario_path("inexact.json"));
  const auto res = run_inexact_validation(sc, 1);
  const double secs = seconds_since(t0);
  std::size_t sandwich = 0, general = 0;
  for (const auto& r : res.rows) {
    sandwich += r.sandwich_ok() ? 0 : 1;
    general += r.general_ok() ? 0 : 1;
  }
  Verdict v;
  v.pass = res.rows.size() == 50 && res.failures.empty() && res.violations == 0 && secs < 600.0;
  v.detail = fmt("%zu instances, sandwich misses %zu, general bound misses %zu, failures %zu, %.1f s",
                 res.rows.size(), sandwich, general, res.failures.size(), secs);
  return v;
}

Verdict criterion_certified_radius() {
  Verdict v;
  const auto half = certified_radius(0.5, 1.0);
  const auto half2 = certified_radius(0.5, 2.5);
  bool zero_ok = half.radius == 0.0 && half2.radius == 0.0;
  Rng rng(77);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double s = 0.5 + 0.499 * (0.001 + 0.998 * rng.uniform());
    worst = std::max(worst, std::abs(certified_radius(s, 1.0).radius - normal_quantile(s)));
  }
  v.pass = zero_ok && worst < 1e-8;
  v.detail = fmt("radius at s=0.5: %g, max deviation from quantile oracle %.2g over 100 values", half.radius, worst);
  return v;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict criterion_determinism() {
  const auto t0 = Clock::now();
  std::vector<Scenario> scenarios;
  {
    auto sw = default_scenario(ScenarioKind::SphereSweep);
    sw.seed = 9;
    sw.zeta = {0.0, 20.0};
    sw.alpha_grid = {0.0, 1.0, 2.0};
    sw.beta_grid = {0.0, 2.0};
    sw.mc_points = 2000;
    sw.mc_votes = 32;
    scenarios.push_back(sw);
    auto ex = sw;
    ex.family = NoiseFamily::UniformBall;
    ex.mode = EvalMode::Exact;
    ex.zeta = {20.0};
    scenarios.push_back(ex);
  }
  scenarios.push_back(default_scenario(ScenarioKind::OneDimConstruction));
  {
    auto bv = default_scenario(ScenarioKind::BoundValidation);
    bv.seed = 3;
    bv.instances = 6;
    bv.mc_points = 2000;
    bv.mc_votes = 32;
    scenarios.push_back(bv);
    auto ix = default_scenario(ScenarioKind::InexactLearning);
    ix.seed = 4;
    ix.instances = 6;
    ix.mc_points = 2000;
    ix.mc_votes = 64;
    scenarios.push_back(ix);
  }

  const auto root = std::filesystem::temp_directory_path() / fmt("smoothlab_determinism_%lld",
                                                                   static_cast<long long>(Clock::now().time_since_epoch().count()));
  Verdict v;
  std::string mismatched;
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const auto& sc = scenarios[i];
    std::string first;
    int run = 0;
    for (std::size_t jobs : {1, 8, 1}) {
      const auto dir = root / fmt("s%zu_r%d", i, run++);
      run_scenario(sc, dir, jobs);
      const auto csv = slurp(dir / sc.outputs.csv);
      if (first.empty()) {
        first = csv;
        if (csv.empty()) mismatched += " " + sc.name + "(empty)";
      } else if (csv != first) {
        mismatched += fmt(" %s(jobs %zu)", sc.name.c_str(), jobs);
      }
    }
  }
  std::filesystem::remove_all(root);
  v.pass = mismatched.empty();
  v.detail = fmt("%zu scenarios run with jobs 1, 8, 1: %s, %.1f s", scenarios.size(),
                 mismatched.empty() ? "byte-identical CSV" : ("differences in" + mismatched).c_str(),
                 seconds_since(t0));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"augmentation strictly raises excess risk in the separated regime", criterion_ordering},
      {"main upper bound holds on random scenarios", criterion_bound_validity},
      {"one-dimensional construction", criterion_construction},
      {"sweep sign pattern", criterion_sign_pattern},
      {"shifted-ball CDF machinery", criterion_cdf},
      {"inexact-learning sandwich and general bound", criterion_sandwich},
      {"certified radius", criterion_certified_radius},
      {"determinism across parallelism", criterion_determinism},
  };
  std::vector<std::size_t> which;
  if (argc > 1) {
    for (int i = 1; i < argc; ++i) which.push_back(std::stoul(argv[i]));
  } else {
    for (std::size_t i = 1; i <= criteria.size(); ++i) which.push_back(i);
  }
  bool all = true;
  for (std::size_t n : which) {
    if (n < 1 || n > criteria.size()) {
      std::printf("criterion %zu: FAIL unknown criterion\n", n);
      all = false;
      continue;
    }
    Verdict v;
    try {
      v = criteria[n - 1].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %zu: %s %s: %s\n", n, v.pass ? "PASS" : "FAIL", criteria[n - 1].first, v.detail.c_str());
    std::fflush(stdout);
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
