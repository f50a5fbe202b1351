#include "smoothlab/harness/runner.hpp"

#include "smoothlab/harness/construction1d.hpp"
#include "smoothlab/harness/output.hpp"
#include "smoothlab/harness/sweep.hpp"
#include "smoothlab/harness/validation.hpp"

namespace smoothlab::harness {

namespace {

template <typename Result>
nlohmann::json validation_manifest(const Scenario& sc, const Result& res) {
  nlohmann::json j;
  j["scenario"] = to_json(sc);
  j["status"] = res.failures.empty() ? "ok" : "partial";
  j["outputs"] = {{"csv", sc.outputs.csv}, {"svg", sc.outputs.svg}};
  j["instances"] = res.rows.size();
  j["violations"] = res.violations;
  auto& fails = j["failures"] = nlohmann::json::array();
  for (const auto& f : res.failures) fails.push_back({{"instance", f.instance}, {"error", f.message}});
  return j;
}

template <typename Result>
RunOutcome validation_outcome(const Result& res, std::string_view what) {
  RunOutcome out;
  out.summary = std::string(what) + ": " + std::to_string(res.rows.size()) + " instances, " +
                std::to_string(res.violations) + " violations, " + std::to_string(res.failures.size()) + " failures";
  if (res.violations > 0) {
    out.exit_code = kExitBoundViolation;
  } else if (!res.failures.empty()) {
    out.exit_code = kExitPartialFailure;
  }
  return out;
}

}  // namespace

RunOutcome run_scenario(const Scenario& sc, const std::filesystem::path& out_dir, std::size_t jobs) {
  sc.validate();
  const auto path = [&](const std::string& name) { return out_dir / name; };
  switch (sc.kind) {
    case ScenarioKind::SphereSweep: {
      const auto res = run_sweep(sc, jobs);
      sweep_csv(sc, res).write(path(sc.outputs.csv));
      write_text(path(sc.outputs.svg), sweep_svg(sc, res));
      write_text(path(sc.outputs.manifest), sweep_manifest(sc, res).dump(2) + "\n");
      RunOutcome out;
      std::size_t dashed = 0;
      for (const auto& f : res.flags) dashed += f.dashed ? 1 : 0;
      out.summary = "sweep: " + std::to_string(res.cells.size()) + " cells, " + std::to_string(dashed) +
                    " dashed rows, " + std::to_string(res.failures.size()) + " failed tasks";
      if (!res.failures.empty()) out.exit_code = kExitPartialFailure;
      return out;
    }
    case ScenarioKind::OneDimConstruction: {
      const auto v = verify_1d_construction(sc.omega, sc.alpha, sc.beta, sc.widened_gap);
      construction_csv(v).write(path(sc.outputs.csv));
      SvgSeries unaug{"unaugmented", {0.0, 1.0}, {v.risk_unaugmented, v.widened_risk_unaugmented}, false};
      SvgSeries aug{"augmented", {0.0, 1.0}, {v.risk_augmented, v.widened_risk_augmented}, true};
      write_text(path(sc.outputs.svg),
                 render_svg({SvgPanel{"narrow gap (0) vs widened gap (1)", {unaug, aug}}}, "variant", "risk"));
      nlohmann::json j;
      j["scenario"] = to_json(sc);
      j["status"] = "ok";
      j["passed"] = v.passed();
      j["failed_checks"] = v.failed();
      write_text(path(sc.outputs.manifest), j.dump(2) + "\n");
      return {kExitOk, std::string("1d construction: ") + (v.passed() ? "all checks pass" : "some checks fail")};
    }
    case ScenarioKind::BoundValidation: {
      const auto res = run_bound_validation(sc, jobs);
      bound_csv(sc, res).write(path(sc.outputs.csv));
      write_text(path(sc.outputs.svg), bound_svg(res));
      write_text(path(sc.outputs.manifest), validation_manifest(sc, res).dump(2) + "\n");
      return validation_outcome(res, "bound validation");
    }
    case ScenarioKind::InexactLearning: {
      const auto res = run_inexact_validation(sc, jobs);
      inexact_csv(sc, res).write(path(sc.outputs.csv));
      write_text(path(sc.outputs.svg), inexact_svg(res));
      write_text(path(sc.outputs.manifest), validation_manifest(sc, res).dump(2) + "\n");
      return validation_outcome(res, "inexact validation");
    }
  }
  return {};
}

}  // namespace smoothlab::harness
