#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "smoothlab/bounds.hpp"
#include "smoothlab/errors.hpp"
#include "smoothlab/harness/construction1d.hpp"
#include "smoothlab/harness/runner.hpp"
#include "smoothlab/harness/scenario.hpp"
#include "smoothlab/harness/spheres.hpp"
#include "smoothlab/noise_models.hpp"
#include "smoothlab/risk.hpp"
#include "smoothlab/smoothing.hpp"

namespace py = pybind11;
using namespace smoothlab;

namespace {

NoiseFamily family_of(const std::string& name) { return parse_noise_family(name); }

std::optional<NoiseModel> model_of(const std::string& family, double scale, std::size_t dim) {
  return make_noise(family_of(family), scale, dim);
}

std::vector<Ball> balls_of(const std::vector<std::pair<std::vector<double>, double>>& pairs) {
  std::vector<Ball> out;
  out.reserve(pairs.size());
  for (const auto& [c, r] : pairs) out.push_back(Ball{c, r});
  return out;
}

py::list balls_to_py(const std::vector<Ball>& balls) {
  py::list out;
  for (const auto& b : balls) out.append(py::make_tuple(b.center, b.radius));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Noise augmentation and randomized smoothing on ball-union conditionals";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<InfeasibleLevel>(m, "InfeasibleLevel", PyExc_ValueError);
  py::register_exception<UnsupportedOperation>(m, "UnsupportedOperation", PyExc_NotImplementedError);

  m.def("psi", &psi, py::arg("z"), "Hard threshold at 0.5 (ties map to 1).");

  m.def(
      "shifted_cdf",
      [](const std::string& family, double scale, double r, const std::vector<double>& x) {
        return shifted_cdf(NoiseModel(family_of(family), scale, x.size()), r, x);
      },
      py::arg("family"), py::arg("scale"), py::arg("r"), py::arg("x"),
      "Probability that x + noise lands in the ball of radius r at the origin.");

  m.def(
      "norm_inverse",
      [](const std::string& family, double scale, std::size_t dim, double r, double c) {
        return norm_inverse(NoiseModel(family_of(family), scale, dim), r, c);
      },
      py::arg("family"), py::arg("scale"), py::arg("dim"), py::arg("r"), py::arg("c"));

  m.def(
      "certified_radius",
      [](double s, double beta) {
        const auto c = certified_radius(s, beta);
        return py::dict(py::arg("radius") = c.radius, py::arg("abstain") = c.abstain, py::arg("capped") = c.capped);
      },
      py::arg("s"), py::arg("beta"));

  m.def(
      "alpha_shrink_radius",
      [](const std::string& family, double alpha, std::size_t dim, double r, double tau) {
        return alpha_shrink_radius(model_of(family, alpha, dim), r, tau);
      },
      py::arg("family"), py::arg("alpha"), py::arg("dim"), py::arg("r"), py::arg("tau"));

  m.def(
      "excess_risk",
      [](const std::vector<std::pair<std::vector<double>, double>>& balls, double tau, std::vector<double> lo,
         std::vector<double> hi, const std::string& family, double alpha, double beta, const std::string& mode,
         std::size_t mc_points, std::size_t mc_votes, std::uint64_t seed) {
        const BallUnionConditional h(balls_of(balls), tau);
        const auto px = DataMeasure::uniform_box(std::move(lo), std::move(hi));
        SmoothingConfig cfg;
        cfg.family = family_of(family);
        cfg.alpha = alpha;
        cfg.beta = beta;
        cfg.mode = parse_eval_mode(mode);
        cfg.mc_samples = mc_votes;
        cfg.seed = seed;
        const auto r = excess_risk(h, px, cfg, mc_points);
        return py::dict(py::arg("value") = r.value, py::arg("std_error") = r.std_error, py::arg("ci_low") = r.ci_low,
                        py::arg("ci_high") = r.ci_high, py::arg("mode") = std::string(to_string(r.mode)));
      },
      py::arg("balls"), py::arg("tau"), py::arg("lo"), py::arg("hi"), py::arg("family") = "gaussian",
      py::arg("alpha") = 0.0, py::arg("beta") = 0.0, py::arg("mode") = "exact", py::arg("mc_points") = 20000,
      py::arg("mc_votes") = 256, py::arg("seed") = 0,
      "Excess risk of the augment-then-smooth pipeline over the base classifier, uniform data on a box.");

  m.def(
      "closed_form_excess",
      [](const std::vector<std::pair<std::vector<double>, double>>& balls, double tau, std::vector<double> lo,
         std::vector<double> hi, const std::string& family, double alpha, double beta) {
        const BallUnionConditional h(balls_of(balls), tau);
        const auto px = DataMeasure::uniform_box(std::move(lo), std::move(hi));
        const std::size_t d = h.dim();
        return closed_form_excess(h, px, model_of(family, alpha, d), model_of(family, beta, d)).value;
      },
      py::arg("balls"), py::arg("tau"), py::arg("lo"), py::arg("hi"), py::arg("family") = "gaussian",
      py::arg("alpha") = 0.0, py::arg("beta") = 0.0);

  m.def(
      "main_upper_bound",
      [](const std::vector<std::pair<std::vector<double>, double>>& balls, double tau, std::vector<double> lo,
         std::vector<double> hi, const std::string& family, double alpha, double beta) {
        const BallUnionConditional h(balls_of(balls), tau);
        const auto px = DataMeasure::uniform_box(std::move(lo), std::move(hi));
        const std::size_t d = h.dim();
        const auto rep =
            main_upper_bound(positive_partitions(h, tau), px, model_of(family, alpha, d), model_of(family, beta, d));
        return py::dict(py::arg("bound") = rep.bound, py::arg("r_alpha") = rep.r_alpha,
                        py::arg("r_alpha_beta") = rep.r_alpha_beta, py::arg("exact") = rep.exact);
      },
      py::arg("balls"), py::arg("tau"), py::arg("lo"), py::arg("hi"), py::arg("family") = "gaussian",
      py::arg("alpha") = 0.0, py::arg("beta") = 0.0);

  m.def(
      "verify_1d_construction",
      [](double omega, double alpha, double beta, std::optional<double> widened_gap) {
        const auto v = harness::verify_1d_construction(omega, alpha, beta, widened_gap);
        py::list checks;
        for (const auto& c : v.checks) checks.append(py::make_tuple(c.name, c.passed, c.detail));
        return py::dict(py::arg("passed") = v.passed(), py::arg("checks") = checks,
                        py::arg("risk_unaugmented") = v.risk_unaugmented, py::arg("risk_augmented") = v.risk_augmented,
                        py::arg("widened_risk_unaugmented") = v.widened_risk_unaugmented,
                        py::arg("widened_risk_augmented") = v.widened_risk_augmented);
      },
      py::arg("omega"), py::arg("alpha"), py::arg("beta"), py::arg("widened_gap") = py::none());

  m.def(
      "sample_spheres",
      [](double zeta, std::uint64_t seed, double radius, std::size_t attempts, std::vector<double> lo,
         std::vector<double> hi) {
        return balls_to_py(
            harness::sample_sphere_config(Box{std::move(lo), std::move(hi)}, zeta, radius, attempts, seed).balls());
      },
      py::arg("zeta"), py::arg("seed"), py::arg("radius") = 10.0, py::arg("attempts") = 500,
      py::arg("lo") = std::vector<double>{0.0, 0.0}, py::arg("hi") = std::vector<double>{100.0, 100.0},
      "Rejection-sampled disjoint balls as a list of (center, radius).");

  m.def(
      "run_scenario",
      [](const std::string& config_json, const std::string& out_dir, std::size_t jobs) {
        const auto sc = harness::parse_scenario(nlohmann::json::parse(config_json));
        harness::RunOutcome r;
        {
          py::gil_scoped_release release;
          r = harness::run_scenario(sc, out_dir, jobs);
        }
        return py::make_tuple(r.exit_code, r.summary);
      },
      py::arg("config_json"), py::arg("out_dir"), py::arg("jobs") = 1,
      "Runs a scenario given as a JSON string and returns (exit_code, summary).");
}
