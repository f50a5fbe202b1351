#include "smoothlab/harness/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <boost/math/distributions/normal.hpp>

#include "smoothlab/errors.hpp"
#include "smoothlab/harness/spheres.hpp"
#include "smoothlab/rng.hpp"

namespace smoothlab::harness {

namespace {

constexpr std::uint64_t kPointsTag = 0x706f696e7473ULL;
constexpr std::uint64_t kSpheresTag = 0x73706865726573ULL;
constexpr std::uint64_t kVotesTag = 0x766f746573ULL;
constexpr double kFlagTol = 1e-12;

double upper_quantile(double tail) {
  const boost::math::normal_distribution<double> n01;
  return boost::math::quantile(boost::math::complement(n01, tail));
}

struct TaskOutput {
  EvalMode mode = EvalMode::MonteCarlo;
  std::vector<double> delta, delta_var, diff, diff_var;  // per α; variances of the mean
};

std::uint64_t config_seed(std::uint64_t seed, std::size_t z, std::size_t k) {
  return mix_seed({seed, z, k, kSpheresTag});
}

bool exact_allowed(const Scenario& sc, const BallUnionConditional& h, double beta) {
  if (sc.mode != EvalMode::Exact) return false;
  const std::size_t m = h.balls().size();
  if (m < 2) return true;
  const double gap = lower_interference_distance(h);
  const std::size_t d = h.dim();
  SmoothingConfig probe;
  probe.family = sc.family;
  probe.beta = beta;
  if (!noninteracting(gap, probe.beta_model(d), m)) return false;
  for (double a : sc.alpha_grid) {
    probe.alpha = a;
    if (!noninteracting(gap, probe.alpha_model(d), m)) return false;
  }
  return true;
}

TaskOutput run_exact_task(const Scenario& sc, const BallUnionConditional& h, double beta, const DataMeasure& px) {
  TaskOutput out;
  out.mode = EvalMode::Exact;
  const HardClassifier base = psi_of(h);
  const double base_risk = risk(base, h, px).value;
  for (double a : sc.alpha_grid) {
    SmoothingConfig cfg;
    cfg.family = sc.family;
    cfg.alpha = a;
    cfg.beta = beta;
    cfg.mode = EvalMode::Exact;
    const double d = risk(two_stage(h, cfg), h, px).value - base_risk;
    out.delta.push_back(d);
    out.delta_var.push_back(0.0);
  }
  const std::size_t zero = static_cast<std::size_t>(
      std::find(sc.alpha_grid.begin(), sc.alpha_grid.end(), 0.0) - sc.alpha_grid.begin());
  for (double d : out.delta) {
    out.diff.push_back(d - out.delta[zero]);
    out.diff_var.push_back(0.0);
  }
  return out;
}

TaskOutput run_mc_task(const Scenario& sc, const BallUnionConditional& h, double beta, const DataMeasure& px,
                       std::uint64_t point_seed_, std::uint64_t vote_seed) {
  TaskOutput out;
  out.mode = EvalMode::MonteCarlo;
  const std::size_t n = sc.mc_points;
  const std::size_t na = sc.alpha_grid.size();
  const std::size_t zero = static_cast<std::size_t>(
      std::find(sc.alpha_grid.begin(), sc.alpha_grid.end(), 0.0) - sc.alpha_grid.begin());

  Rng rng(point_seed_);
  std::vector<Point> xs(n, Point(px.dim()));
  for (auto& x : xs) px.draw(rng, x);

  const HardClassifier base = psi_of(h);
  std::vector<HardClassifier> pipelines;
  pipelines.reserve(na);
  for (double a : sc.alpha_grid) {
    SmoothingConfig cfg;
    cfg.family = sc.family;
    cfg.alpha = a;
    cfg.beta = beta;
    cfg.mode = EvalMode::MonteCarlo;
    cfg.mc_samples = sc.mc_votes;
    cfg.seed = vote_seed;
    pipelines.push_back(two_stage(h, cfg));
  }

  std::vector<double> s(na, 0.0), s2(na, 0.0), t(na, 0.0), t2(na, 0.0);
  std::vector<double> d(na);
  for (const auto& x : xs) {
    const double hv = h(x);
    const double lb = pointwise_loss(base(x), hv);
    for (std::size_t a = 0; a < na; ++a) d[a] = pointwise_loss(pipelines[a](x), hv) - lb;
    for (std::size_t a = 0; a < na; ++a) {
      const double e = d[a] - d[zero];
      s[a] += d[a];
      s2[a] += d[a] * d[a];
      t[a] += e;
      t2[a] += e * e;
    }
  }
  const auto nn = static_cast<double>(n);
  auto var_of_mean = [nn](double sum, double sum2) {
    const double m = sum / nn;
    return std::max(0.0, (sum2 - nn * m * m) / (nn - 1.0)) / nn;
  };
  for (std::size_t a = 0; a < na; ++a) {
    out.delta.push_back(s[a] / nn);
    out.delta_var.push_back(var_of_mean(s[a], s2[a]));
    out.diff.push_back(t[a] / nn);
    out.diff_var.push_back(var_of_mean(t[a], t2[a]));
  }
  return out;
}

}  // namespace

const SweepFlag& SweepResult::flag(std::size_t zeta_index, std::size_t beta_index) const {
  for (const auto& f : flags) {
    if (f.zeta_index == zeta_index && f.beta_index == beta_index) return f;
  }
  throw InvalidArgument("SweepResult::flag: no such grid row");
}

const SweepCell& SweepResult::cell(std::size_t zeta_index, std::size_t alpha_index, std::size_t beta_index) const {
  for (const auto& c : cells) {
    if (c.zeta_index == zeta_index && c.alpha_index == alpha_index && c.beta_index == beta_index) return c;
  }
  throw InvalidArgument("SweepResult::cell: no such grid cell");
}

SweepResult run_sweep(const Scenario& sc, std::size_t jobs) {
  detail::require(sc.kind == ScenarioKind::SphereSweep, "run_sweep: scenario must be a SphereSweep");
  sc.validate();
  const std::size_t nz = sc.zeta.size();
  const std::size_t nk = sc.configs_per_zeta;
  const std::size_t nb = sc.beta_grid.size();
  const std::size_t na = sc.alpha_grid.size();
  const auto px = DataMeasure::uniform_box(sc.domain.lo, sc.domain.hi);

  SweepResult res;
  std::vector<std::optional<BallUnionConditional>> configs(nz * nk);
  std::vector<std::string> config_errors(nz * nk);
  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t k = 0; k < nk; ++k) {
      try {
        configs[z * nk + k] =
            sample_sphere_config(sc.domain, sc.zeta[z], sc.radius, sc.attempts, config_seed(sc.seed, z, k), sc.tau);
        res.sphere_counts.push_back(configs[z * nk + k]->balls().size());
      } catch (const std::exception& e) {
        config_errors[z * nk + k] = e.what();
        res.sphere_counts.push_back(0);
      }
    }
  }

  // One task per (ζ, configuration, β); every α shares the task's draws.
  const std::size_t ntasks = nz * nk * nb;
  std::vector<std::optional<TaskOutput>> outputs(ntasks);
  auto errors = parallel_for(ntasks, jobs, [&](std::size_t i) {
    const std::size_t b = i % nb;
    const std::size_t k = (i / nb) % nk;
    const std::size_t z = i / (nb * nk);
    const auto& cfg = configs[z * nk + k];
    if (!cfg) throw InvalidArgument(config_errors[z * nk + k]);
    const double beta = sc.beta_grid[b];
    if (exact_allowed(sc, *cfg, beta)) {
      try {
        outputs[i] = run_exact_task(sc, *cfg, beta, px);
        return;
      } catch (const UnsupportedOperation&) {
      }
    }
    outputs[i] = run_mc_task(sc, *cfg, beta, px, mix_seed({sc.seed, z, k, kPointsTag}),
                             mix_seed({sc.seed, z, k, b, kVotesTag}));
  });
  for (std::size_t i = 0; i < ntasks; ++i) {
    if (!errors[i].empty()) res.failures.push_back({i / (nb * nk), (i / nb) % nk, i % nb, errors[i]});
  }

  const std::size_t positive_alphas =
      static_cast<std::size_t>(std::count_if(sc.alpha_grid.begin(), sc.alpha_grid.end(), [](double a) { return a > 0.0; }));
  const double z_simul = upper_quantile((1.0 - kHarnessConfidence) / (2.0 * std::max<std::size_t>(1, positive_alphas)));

  for (std::size_t z = 0; z < nz; ++z) {
    for (std::size_t b = 0; b < nb; ++b) {
      bool row_ok = true;
      bool any_mc = false;
      for (std::size_t k = 0; k < nk; ++k) {
        const auto& o = outputs[(z * nk + k) * nb + b];
        row_ok = row_ok && o.has_value();
        any_mc = any_mc || (o && o->mode == EvalMode::MonteCarlo);
      }
      SweepFlag flag{z, b, row_ok, false, std::numeric_limits<double>::infinity()};
      for (std::size_t a = 0; a < na; ++a) {
        SweepCell cell;
        cell.zeta_index = z;
        cell.alpha_index = a;
        cell.beta_index = b;
        cell.zeta = sc.zeta[z];
        cell.alpha = sc.alpha_grid[a];
        cell.beta = sc.beta_grid[b];
        cell.mode = any_mc ? EvalMode::MonteCarlo : EvalMode::Exact;
        cell.configs = nk;
        cell.ok = row_ok;
        if (!row_ok) {
          cell.delta = cell.delta_se = cell.diff = cell.diff_se = cell.diff_upper =
              std::numeric_limits<double>::quiet_NaN();
          res.cells.push_back(cell);
          continue;
        }
        double dv = 0.0, ev = 0.0;
        for (std::size_t k = 0; k < nk; ++k) {
          const auto& o = *outputs[(z * nk + k) * nb + b];
          cell.delta += o.delta[a];
          cell.diff += o.diff[a];
          dv += o.delta_var[a];
          ev += o.diff_var[a];
        }
        const auto kk = static_cast<double>(nk);
        cell.delta /= kk;
        cell.diff /= kk;
        cell.delta_se = std::sqrt(dv) / kk;
        cell.diff_se = std::sqrt(ev) / kk;
        cell.diff_upper = cell.diff + z_simul * cell.diff_se;
        if (cell.alpha > 0.0) {
          flag.min_diff_upper = std::min(flag.min_diff_upper, cell.diff_upper);
          if (cell.diff_upper < -kFlagTol) flag.dashed = true;
        }
        res.cells.push_back(cell);
      }
      if (!row_ok) flag.min_diff_upper = std::numeric_limits<double>::quiet_NaN();
      res.flags.push_back(flag);
    }
  }
  return res;
}

CsvTable sweep_csv(const Scenario& sc, const SweepResult& res) {
  const double z = upper_quantile((1.0 - kHarnessConfidence) / 2.0);
  CsvTable t({"zeta", "alpha", "beta", "configs", "status", "delta", "delta_se", "delta_ci_low", "delta_ci_high",
              "diff", "diff_se", "diff_upper", "dashed", "seed", "mode", "mc_samples", "mc_votes"});
  for (const auto& c : res.cells) {
    const auto& f = res.flag(c.zeta_index, c.beta_index);
    t.row()
        .add(c.zeta)
        .add(c.alpha)
        .add(c.beta)
        .add(c.configs)
        .add(std::string_view(c.ok ? "ok" : "failed"))
        .add(c.delta)
        .add(c.delta_se)
        .add(c.delta - z * c.delta_se)
        .add(c.delta + z * c.delta_se)
        .add(c.diff)
        .add(c.diff_se)
        .add(c.diff_upper)
        .add(f.dashed)
        .add(static_cast<std::uint64_t>(sc.seed))
        .add(to_string(c.mode))
        .add(c.mode == EvalMode::Exact ? std::size_t{0} : sc.mc_points)
        .add(c.mode == EvalMode::Exact ? std::size_t{0} : sc.mc_votes);
  }
  return t;
}

std::string sweep_svg(const Scenario& sc, const SweepResult& res) {
  std::vector<SvgPanel> panels;
  for (std::size_t b = 0; b < sc.beta_grid.size(); ++b) {
    SvgPanel p;
    p.title = "beta = " + format_number(sc.beta_grid[b]);
    for (std::size_t z = 0; z < sc.zeta.size(); ++z) {
      SvgSeries s;
      s.label = "zeta = " + format_number(sc.zeta[z]);
      s.dashed = res.flag(z, b).dashed;
      for (std::size_t a = 0; a < sc.alpha_grid.size(); ++a) {
        s.x.push_back(sc.alpha_grid[a]);
        s.y.push_back(res.cell(z, a, b).diff);
      }
      p.series.push_back(std::move(s));
    }
    panels.push_back(std::move(p));
  }
  return render_svg(panels, "alpha", "delta(alpha, beta) - delta(0, beta)");
}

nlohmann::json sweep_manifest(const Scenario& sc, const SweepResult& res) {
  nlohmann::json j;
  j["scenario"] = to_json(sc);
  j["status"] = res.failures.empty() ? "ok" : "partial";
  j["outputs"] = {{"csv", sc.outputs.csv}, {"svg", sc.outputs.svg}};
  j["sphere_counts"] = res.sphere_counts;
  auto& flags = j["flags"] = nlohmann::json::array();
  for (const auto& f : res.flags) {
    flags.push_back({{"zeta", sc.zeta[f.zeta_index]},
                     {"beta", sc.beta_grid[f.beta_index]},
                     {"status", f.ok ? "ok" : "failed"},
                     {"dashed", f.dashed}});
  }
  auto& fails = j["failures"] = nlohmann::json::array();
  for (const auto& f : res.failures) {
    fails.push_back({{"zeta", sc.zeta[f.zeta_index]},
                     {"config", f.config},
                     {"beta", sc.beta_grid[f.beta_index]},
                     {"error", f.message}});
  }
  return j;
}

}  // namespace smoothlab::harness
