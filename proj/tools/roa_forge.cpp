#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "roaforge/jsonio.hpp"
#include "roaforge/pipeline.hpp"
#include "roaforge/simcheck.hpp"

namespace {

using namespace roaforge;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitValidationFailed = 3;

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::vector<double> lambda_grid;
  std::optional<int> samples;
};

void apply_overrides(jsonio::RunConfig& cfg, const Overrides& ov) {
  if (ov.seed) cfg.validation.seed = *ov.seed;
  if (!ov.lambda_grid.empty()) cfg.spec.solver.lambda_grid = ov.lambda_grid;
  if (ov.samples) cfg.validation.samples = *ov.samples;
}

int cmd_estimate(const std::string& config_path, const Overrides& ov) {
  jsonio::RunConfig cfg;
  try {
    cfg = jsonio::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  apply_overrides(cfg, ov);

  pipeline::MultiResult multi = pipeline::run_multi(cfg.spec);
  for (size_t i = 0; i < multi.case_results.size(); ++i) {
    const auto& cr = multi.case_results[i];
    if (!cr.ok)
      std::cerr << "case " << i << " failed at stage \"" << cr.failed_stage
                << "\": " << cr.message << "\n";
  }

  jsonio::ResultsFile results;
  results.cases = multi.case_results;
  results.seed = cfg.validation.seed;
  results.original_box = cfg.spec.original_box;

  if (!multi.all_failed() && cfg.spec.system.dim == 2) {
    polyalg::BoxDomain bbox = multi.region.bounding_box();
    for (const auto& m : multi.region.members)
      results.member_areas.push_back(pipeline::area_estimate(
          [&](const Eigen::VectorXd& x) { return levelset::contains(m, x); }, bbox,
          cfg.validation.area_samples, cfg.validation.seed));
    results.union_area = pipeline::area_estimate(
        [&](const Eigen::VectorXd& x) { return pipeline::union_contains(multi.region, x); },
        bbox, cfg.validation.area_samples, cfg.validation.seed);
  }

  try {
    jsonio::write_text_file(cfg.outputs.results, jsonio::results_to_json(results));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (multi.all_failed()) {
    std::cerr << "error: all cases failed\n";
    return kExitInfeasible;
  }
  std::cout << "wrote " << cfg.outputs.results << " (" << multi.region.members.size() << "/"
            << multi.case_results.size() << " cases succeeded)\n";
  return kExitOk;
}

int cmd_validate(const std::string& results_path, const std::string& config_path,
                 const Overrides& ov) {
  jsonio::ResultsFile results;
  jsonio::RunConfig cfg;
  try {
    results = jsonio::results_from_json(jsonio::read_text_file(results_path));
    cfg = jsonio::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  apply_overrides(cfg, ov);

  bool all_ok = true;
  for (size_t i = 0; i < results.cases.size(); ++i) {
    const auto& cr = results.cases[i];
    if (!cr.ok) continue;
    if (!cr.certificate || !cr.model || !cr.estimate) {
      std::cerr << "case " << i << ": results file lacks certificate/vertices/estimate\n";
      all_ok = false;
      continue;
    }
    lmikit::LdiSystem ldi(cr.model->vertices);
    auto rep = lmikit::verify_certificate(*cr.certificate, ldi, cfg.spec.solver.margin_tol);
    if (!rep.accepted) {
      std::cerr << "case " << i << ": certificate re-verification FAILED (margin "
                << rep.margin << ")\n";
      all_ok = false;
      continue;
    }

    const auto& est = *cr.estimate;
    polyalg::Transform inv(est.transform.inverse(), est.transform.matrix());
    polyalg::BoxDomain sample_box = polyalg::map_box_bounding(est.box, inv);
    simcheck::IntegrateOptions opts;
    opts.dt = cfg.validation.dt;
    opts.horizon = cfg.validation.horizon;
    auto report = simcheck::validate_region(
        [&](const Eigen::VectorXd& x) { return levelset::contains(est, x); }, sample_box,
        cfg.spec.system, cfg.validation.samples, cfg.validation.seed, opts);
    if (report.converged != report.tested) {
      std::cerr << "case " << i << ": " << report.tested - report.converged << "/"
                << report.tested << " samples did not converge; counterexample x = [";
      for (int d = 0; d < report.worst_point.size(); ++d)
        std::cerr << (d ? ", " : "") << report.worst_point[d];
      std::cerr << "]\n";
      all_ok = false;
    } else {
      std::cout << "case " << i << ": certificate verified (margin " << rep.margin << "), "
                << report.converged << "/" << report.tested << " samples converged\n";
    }
  }
  return all_ok ? kExitOk : kExitValidationFailed;
}

int cmd_render(const std::string& results_path, const std::string& svg_path) {
  jsonio::ResultsFile results;
  try {
    results = jsonio::results_from_json(jsonio::read_text_file(results_path));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  pipeline::UnionRegion region;
  for (const auto& cr : results.cases)
    if (cr.ok && cr.estimate) region.members.push_back(*cr.estimate);
  try {
    polyalg::BoxDomain box =
        results.original_box ? *results.original_box : region.bounding_box();
    jsonio::RenderOutput out = jsonio::render_region(region, box);
    jsonio::write_text_file(svg_path, out.svg);
    std::string csv_path = svg_path;
    if (auto dot = csv_path.rfind('.'); dot != std::string::npos) csv_path.resize(dot);
    csv_path += ".csv";
    jsonio::write_text_file(csv_path, out.csv);
    std::cout << "wrote " << svg_path << " and " << csv_path << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"roa-forge: region-of-attraction estimation for polynomial systems via "
               "coordinate-transformed convex models and piecewise quadratic Lyapunov "
               "functions"};
  app.require_subcommand(1);

  Overrides ov;
  std::string config_path, results_path, svg_path;

  auto* est = app.add_subcommand("estimate", "run the pipeline on a config file");
  est->add_option("config", config_path, "config JSON path")->required();
  est->add_option("--seed", ov.seed, "override validation/area seed");
  est->add_option("--lambda-grid", ov.lambda_grid, "override the lambda grid")->delimiter(',');
  est->add_option("--samples", ov.samples, "override validation sample count");

  auto* val = app.add_subcommand("validate", "re-verify certificates and simulate");
  val->add_option("results", results_path, "results JSON path")->required();
  val->add_option("config", config_path, "config JSON path")->required();
  val->add_option("--seed", ov.seed, "override validation seed");
  val->add_option("--samples", ov.samples, "override validation sample count");

  auto* ren = app.add_subcommand("render", "emit SVG + CSV of the region boundaries");
  ren->add_option("results", results_path, "results JSON path")->required();
  ren->add_option("svg", svg_path, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (est->parsed()) return cmd_estimate(config_path, ov);
    if (val->parsed()) return cmd_validate(results_path, config_path, ov);
    if (ren->parsed()) return cmd_render(results_path, svg_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
