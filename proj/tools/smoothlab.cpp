#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <thread>

#include "smoothlab/errors.hpp"
#include "smoothlab/harness/construction1d.hpp"
#include "smoothlab/harness/output.hpp"
#include "smoothlab/harness/runner.hpp"
#include "smoothlab/harness/spheres.hpp"

namespace sh = smoothlab::harness;

namespace {

int cmd_run(const std::string& config, const std::string& out, std::optional<std::uint64_t> seed,
            std::optional<std::string> mode, std::optional<std::size_t> mc_samples, std::size_t jobs) {
  auto sc = sh::load_scenario(config);
  if (seed) sc.seed = *seed;
  if (mode) sc.mode = smoothlab::parse_eval_mode(*mode);
  if (mc_samples) sc.mc_points = *mc_samples;
  sc.validate();
  const auto outcome = sh::run_scenario(sc, out, jobs);
  std::cout << outcome.summary << "\n";
  return outcome.exit_code;
}

int cmd_verify_1d(double omega, double alpha, double beta, std::optional<double> gap) {
  const auto v = sh::verify_1d_construction(omega, alpha, beta, gap);
  for (const auto& c : v.checks) {
    std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  (" << c.detail << ")\n";
  }
  std::cout << "risk unaugmented = " << sh::format_number(v.risk_unaugmented)
            << ", risk augmented = " << sh::format_number(v.risk_augmented) << "\n";
  std::cout << "widened gap " << sh::format_number(v.widened_gap)
            << ": risk unaugmented = " << sh::format_number(v.widened_risk_unaugmented)
            << ", risk augmented = " << sh::format_number(v.widened_risk_augmented) << "\n";
  return v.passed() ? 0 : 1;
}

int cmd_sample_spheres(double zeta, std::uint64_t seed, const std::string& out, double radius, std::size_t attempts,
                       double lo, double hi, double tau) {
  const smoothlab::Box domain{{lo, lo}, {hi, hi}};
  const auto h = sh::sample_sphere_config(domain, zeta, radius, attempts, seed, tau);
  nlohmann::json j;
  j["zeta"] = zeta;
  j["seed"] = seed;
  j["tau"] = tau;
  j["domain"] = {{"lo", domain.lo}, {"hi", domain.hi}};
  auto& balls = j["balls"] = nlohmann::json::array();
  for (const auto& b : h.balls()) balls.push_back({{"center", b.center}, {"radius", b.radius}});
  if (h.balls().size() >= 2) j["lower_interference_distance"] = smoothlab::lower_interference_distance(h);
  sh::write_text(out, j.dump(2) + "\n");
  std::cout << h.balls().size() << " spheres written to " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized smoothing and noise augmentation on analytic data distributions"};
  app.require_subcommand(1);

  std::string config, out;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::size_t> mc_samples;
  std::size_t jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("--config", config, "Scenario JSON file")->required();
  run->add_option("--out", out, "Output directory")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--mode", mode, "Evaluation mode")->check(CLI::IsMember({"exact", "mc"}));
  run->add_option("--mc-samples", mc_samples, "Monte-Carlo points per risk");
  run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  double omega = 0.23, alpha = 0.1, beta = 0.93;
  std::optional<double> gap;
  auto* v1d = app.add_subcommand("verify-1d", "Check the one-dimensional construction");
  v1d->add_option("--omega", omega);
  v1d->add_option("--alpha", alpha);
  v1d->add_option("--beta", beta);
  v1d->add_option("--widened-gap", gap, "Middle gap of the widened variant (default: alpha)");

  double zeta = 0.0, radius = 10.0, lo = 0.0, hi = 100.0, tau = 0.1;
  std::uint64_t sphere_seed = 0;
  std::size_t attempts = 500;
  std::string sphere_out;
  auto* sph = app.add_subcommand("sample-spheres", "Sample a disjoint sphere configuration");
  sph->add_option("--zeta", zeta)->required();
  sph->add_option("--seed", sphere_seed);
  sph->add_option("--out", sphere_out)->required();
  sph->add_option("--radius", radius);
  sph->add_option("--attempts", attempts);
  sph->add_option("--lo", lo, "Lower corner coordinate of the square domain");
  sph->add_option("--hi", hi, "Upper corner coordinate of the square domain");
  sph->add_option("--tau", tau);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : sh::kExitInvalidConfig;
  }

  try {
    if (*run) return cmd_run(config, out, seed, mode, mc_samples, jobs);
    if (*v1d) return cmd_verify_1d(omega, alpha, beta, gap);
    return cmd_sample_spheres(zeta, sphere_seed, sphere_out, radius, attempts, lo, hi, tau);
  } catch (const smoothlab::InvalidArgument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return sh::kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return sh::kExitPartialFailure;
  }
}
