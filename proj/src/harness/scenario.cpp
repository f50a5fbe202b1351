#include "smoothlab/harness/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "smoothlab/errors.hpp"

namespace smoothlab::harness {

using nlohmann::json;

std::string_view to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::SphereSweep: return "SphereSweep";
    case ScenarioKind::OneDimConstruction: return "OneDimConstruction";
    case ScenarioKind::BoundValidation: return "BoundValidation";
    case ScenarioKind::InexactLearning: return "InexactLearning";
  }
  return "SphereSweep";
}

ScenarioKind parse_scenario_kind(std::string_view s) {
  for (auto k : {ScenarioKind::SphereSweep, ScenarioKind::OneDimConstruction, ScenarioKind::BoundValidation,
                 ScenarioKind::InexactLearning}) {
    if (s == to_string(k)) return k;
  }
  throw InvalidArgument("unknown scenario kind: " + std::string(s));
}

namespace {

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> g;
  const auto n = static_cast<int>(std::llround((hi - lo) / step));
  for (int i = 0; i <= n; ++i) g.push_back(lo + step * i);
  return g;
}

const std::set<std::string>& allowed_keys(ScenarioKind k) {
  static const std::set<std::string> sweep{"kind", "name", "seed", "mode", "mc_points", "mc_votes", "outputs",
                                           "domain", "noise", "alpha_grid", "beta_grid", "zeta", "radius",
                                           "attempts", "tau", "configs_per_zeta"};
  static const std::set<std::string> one_dim{"kind", "name", "seed", "mode", "outputs",
                                             "omega", "alpha", "beta", "widened_gap"};
  static const std::set<std::string> bounds{"kind", "name", "seed", "mode", "mc_points", "mc_votes", "outputs",
                                            "domain", "noise", "instances", "tau_grid"};
  static const std::set<std::string> inexact{"kind", "name", "seed", "mode", "mc_points", "mc_votes", "outputs",
                                             "domain", "noise", "instances", "etas"};
  switch (k) {
    case ScenarioKind::SphereSweep: return sweep;
    case ScenarioKind::OneDimConstruction: return one_dim;
    case ScenarioKind::BoundValidation: return bounds;
    case ScenarioKind::InexactLearning: return inexact;
  }
  return sweep;
}

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument("scenario field '" + key + "': " + e.what());
  }
}

std::size_t get_count(const json& j, const std::string& key) {
  const auto& v = j.at(key);
  if (!v.is_number_unsigned()) throw InvalidArgument("scenario field '" + key + "' must be a nonnegative integer");
  return v.get<std::size_t>();
}

}  // namespace

void Scenario::validate() const {
  detail::require(mc_points >= 2, "scenario: mc_points must be at least 2");
  detail::require(mc_votes >= 1, "scenario: mc_votes must be positive");
  detail::require(domain.lo.size() == domain.hi.size() && !domain.lo.empty(), "scenario: malformed domain");
  for (std::size_t i = 0; i < domain.lo.size(); ++i) {
    detail::require(domain.lo[i] < domain.hi[i], "scenario: domain must be nondegenerate");
  }
  switch (kind) {
    case ScenarioKind::SphereSweep:
      detail::require(!alpha_grid.empty() && !beta_grid.empty() && !zeta.empty(), "scenario: grids must be nonempty");
      for (double a : alpha_grid) detail::require(a >= 0.0, "scenario: alpha grid must be nonnegative");
      for (double b : beta_grid) detail::require(b >= 0.0, "scenario: beta grid must be nonnegative");
      for (double z : zeta) detail::require(z >= 0.0, "scenario: zeta must be nonnegative");
      detail::require(std::count(alpha_grid.begin(), alpha_grid.end(), 0.0) == 1,
                      "scenario: alpha grid must contain 0 exactly once");
      detail::require(radius > 0.0 && attempts >= 1, "scenario: radius and attempts must be positive");
      detail::require(tau >= 0.0 && tau < 0.5, "scenario: tau must lie in [0, 0.5)");
      detail::require(configs_per_zeta >= 1, "scenario: configs_per_zeta must be positive");
      break;
    case ScenarioKind::OneDimConstruction:
      detail::require(omega > 0.0 && omega <= 0.25, "scenario: omega must lie in (0, 0.25]");
      detail::require(alpha > 0.0 && beta > 0.0, "scenario: alpha and beta must be positive");
      if (widened_gap) detail::require(*widened_gap > 0.0 && *widened_gap < 0.5, "scenario: widened_gap must lie in (0, 0.5)");
      break;
    case ScenarioKind::BoundValidation:
      detail::require(instances >= 1, "scenario: instances must be positive");
      detail::require(!tau_grid.empty(), "scenario: tau grid must be nonempty");
      for (double t : tau_grid) detail::require(t >= 0.0 && t < 0.5, "scenario: tau grid must lie in [0, 0.5)");
      detail::require(domain.dim() == 2, "scenario: validation ensembles use a 2D domain");
      break;
    case ScenarioKind::InexactLearning:
      detail::require(instances >= 1, "scenario: instances must be positive");
      detail::require(!etas.empty(), "scenario: eta list must be nonempty");
      for (double e : etas) detail::require(e >= 0.0 && e < 0.5, "scenario: eta must lie in [0, 0.5)");
      detail::require(domain.dim() == 2, "scenario: validation ensembles use a 2D domain");
      break;
  }
}

Scenario default_scenario(ScenarioKind kind) {
  Scenario sc;
  sc.kind = kind;
  sc.name = std::string(to_string(kind));
  switch (kind) {
    case ScenarioKind::SphereSweep:
      sc.alpha_grid = grid(0.0, 5.0, 0.5);
      sc.beta_grid = grid(0.0, 5.0, 1.0);
      sc.zeta = {0.0, 10.0, 20.0, 30.0};
      sc.outputs = {"sweep.csv", "sweep.svg", "manifest.json"};
      break;
    case ScenarioKind::OneDimConstruction:
      sc.mode = EvalMode::Exact;
      sc.outputs = {"construction.csv", "construction.svg", "manifest.json"};
      break;
    case ScenarioKind::BoundValidation:
      sc.mixed_noise = true;
      sc.outputs = {"bounds.csv", "bounds.svg", "manifest.json"};
      break;
    case ScenarioKind::InexactLearning:
      sc.mixed_noise = true;
      sc.mc_votes = 512;
      sc.outputs = {"inexact.csv", "inexact.svg", "manifest.json"};
      break;
  }
  return sc;
}

Scenario parse_scenario(const json& j) {
  if (!j.is_object()) throw InvalidArgument("scenario must be a JSON object");
  if (!j.contains("kind")) throw InvalidArgument("scenario is missing 'kind'");
  Scenario sc = default_scenario(parse_scenario_kind(get_as<std::string>(j, "kind")));
  const auto& allowed = allowed_keys(sc.kind);
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw InvalidArgument("unknown scenario key '" + key + "'");
  }

  if (j.contains("name")) sc.name = get_as<std::string>(j, "name");
  if (j.contains("seed")) sc.seed = get_count(j, "seed");
  if (j.contains("mode")) sc.mode = parse_eval_mode(get_as<std::string>(j, "mode"));
  if (j.contains("mc_points")) sc.mc_points = get_count(j, "mc_points");
  if (j.contains("mc_votes")) sc.mc_votes = get_count(j, "mc_votes");
  if (j.contains("outputs")) {
    const auto& o = j.at("outputs");
    if (!o.is_object()) throw InvalidArgument("scenario field 'outputs' must be an object");
    for (const auto& [key, value] : o.items()) {
      if (key != "csv" && key != "svg" && key != "manifest") throw InvalidArgument("unknown outputs key '" + key + "'");
    }
    if (o.contains("csv")) sc.outputs.csv = get_as<std::string>(o, "csv");
    if (o.contains("svg")) sc.outputs.svg = get_as<std::string>(o, "svg");
    if (o.contains("manifest")) sc.outputs.manifest = get_as<std::string>(o, "manifest");
  }
  if (j.contains("domain")) {
    const auto& d = j.at("domain");
    if (!d.is_object()) throw InvalidArgument("scenario field 'domain' must be an object");
    for (const auto& [key, value] : d.items()) {
      if (key != "lo" && key != "hi") throw InvalidArgument("unknown domain key '" + key + "'");
    }
    sc.domain.lo = get_as<std::vector<double>>(d, "lo");
    sc.domain.hi = get_as<std::vector<double>>(d, "hi");
  }
  if (j.contains("noise")) {
    const auto name = get_as<std::string>(j, "noise");
    if (name == "mixed") {
      if (sc.kind == ScenarioKind::SphereSweep) throw InvalidArgument("sweeps need a single noise family");
      sc.mixed_noise = true;
    } else {
      sc.family = parse_noise_family(name);
      sc.mixed_noise = false;
    }
  }
  if (j.contains("alpha_grid")) sc.alpha_grid = get_as<std::vector<double>>(j, "alpha_grid");
  if (j.contains("beta_grid")) sc.beta_grid = get_as<std::vector<double>>(j, "beta_grid");
  if (j.contains("zeta")) sc.zeta = get_as<std::vector<double>>(j, "zeta");
  if (j.contains("radius")) sc.radius = get_as<double>(j, "radius");
  if (j.contains("attempts")) sc.attempts = get_count(j, "attempts");
  if (j.contains("tau")) sc.tau = get_as<double>(j, "tau");
  if (j.contains("configs_per_zeta")) sc.configs_per_zeta = get_count(j, "configs_per_zeta");
  if (j.contains("omega")) sc.omega = get_as<double>(j, "omega");
  if (j.contains("alpha")) sc.alpha = get_as<double>(j, "alpha");
  if (j.contains("beta")) sc.beta = get_as<double>(j, "beta");
  if (j.contains("widened_gap")) sc.widened_gap = get_as<double>(j, "widened_gap");
  if (j.contains("instances")) sc.instances = get_count(j, "instances");
  if (j.contains("etas")) sc.etas = get_as<std::vector<double>>(j, "etas");
  if (j.contains("tau_grid")) sc.tau_grid = get_as<std::vector<double>>(j, "tau_grid");
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot open scenario file " + path.string());
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw InvalidArgument("scenario file is not valid JSON: " + std::string(e.what()));
  }
  return parse_scenario(j);
}

json to_json(const Scenario& sc) {
  json j;
  j["kind"] = std::string(to_string(sc.kind));
  j["name"] = sc.name;
  j["seed"] = sc.seed;
  j["mode"] = std::string(to_string(sc.mode));
  j["outputs"] = {{"csv", sc.outputs.csv}, {"svg", sc.outputs.svg}, {"manifest", sc.outputs.manifest}};
  if (sc.kind == ScenarioKind::OneDimConstruction) {
    j["omega"] = sc.omega;
    j["alpha"] = sc.alpha;
    j["beta"] = sc.beta;
    if (sc.widened_gap) j["widened_gap"] = *sc.widened_gap;
    return j;
  }
  j["mc_points"] = sc.mc_points;
  j["mc_votes"] = sc.mc_votes;
  j["domain"] = {{"lo", sc.domain.lo}, {"hi", sc.domain.hi}};
  j["noise"] = sc.mixed_noise ? std::string("mixed") : std::string(to_string(sc.family));
  switch (sc.kind) {
    case ScenarioKind::SphereSweep:
      j["alpha_grid"] = sc.alpha_grid;
      j["beta_grid"] = sc.beta_grid;
      j["zeta"] = sc.zeta;
      j["radius"] = sc.radius;
      j["attempts"] = sc.attempts;
      j["tau"] = sc.tau;
      j["configs_per_zeta"] = sc.configs_per_zeta;
      break;
    case ScenarioKind::BoundValidation:
      j["instances"] = sc.instances;
      j["tau_grid"] = sc.tau_grid;
      break;
    case ScenarioKind::InexactLearning:
      j["instances"] = sc.instances;
      j["etas"] = sc.etas;
      break;
    case ScenarioKind::OneDimConstruction:
      break;
  }
  return j;
}

}  // namespace smoothlab::harness
