#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "smoothlab/noise_models.hpp"
#include "smoothlab/risk.hpp"
#include "smoothlab/smoothing.hpp"

namespace smoothlab::harness {

enum class ScenarioKind { SphereSweep, OneDimConstruction, BoundValidation, InexactLearning };

std::string_view to_string(ScenarioKind k);
ScenarioKind parse_scenario_kind(std::string_view s);

struct OutputPaths {
  std::string csv = "results.csv";
  std::string svg = "results.svg";
  std::string manifest = "manifest.json";
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::SphereSweep;
  std::string name = "scenario";
  std::uint64_t seed = 0;
  EvalMode mode = EvalMode::MonteCarlo;
  std::size_t mc_points = 20000;
  std::size_t mc_votes = 256;
  OutputPaths outputs;

  // Sphere configurations.
  Box domain{{0.0, 0.0}, {100.0, 100.0}};
  NoiseFamily family = NoiseFamily::GaussianIso;
  bool mixed_noise = false;  // validation ensembles alternate both families
  std::vector<double> alpha_grid;
  std::vector<double> beta_grid;
  std::vector<double> zeta;
  double radius = 10.0;
  std::size_t attempts = 500;
  double tau = 0.1;
  std::size_t configs_per_zeta = 1;

  // One-dimensional construction.
  double omega = 0.23;
  double alpha = 0.1;
  double beta = 0.93;
  std::optional<double> widened_gap;

  // Validation ensembles.
  std::size_t instances = 50;
  std::vector<double> etas{0.02, 0.05, 0.1};
  std::vector<double> tau_grid{0.0, 0.05, 0.1, 0.25, 0.45};

  void validate() const;
};

/// Defaults for each kind (the sweep defaults are the desk-scale grids).
Scenario default_scenario(ScenarioKind kind);

/// Strict parse: unknown keys and malformed values throw InvalidArgument.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json to_json(const Scenario& sc);

}  // namespace smoothlab::harness
