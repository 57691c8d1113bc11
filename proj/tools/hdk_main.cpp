#include <iostream>

#include <CLI11.hpp>

#include "hdk/commands.hpp"

using namespace hdk::cli;

int main(int argc, char** argv) {
  CLI::App app{"Horizon-depth layout toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Seed recorded in output manifests");
  app.add_flag("--quiet", g.quiet, "Only print errors");

  GenGtArgs gen;
  auto* gen_cmd = app.add_subcommand("gen-gt", "Ground-truth horizon depth from a layout annotation");
  gen_cmd->add_option("annotation", gen.input, "Annotation JSON or directory of them")->required();
  gen_cmd->add_option("--m", gen.m, "Number of rays")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output depth JSON (directory for directory input)")->required();
  gen_cmd->add_option("--boundary", gen.boundary_out, "Also write the corner boundary JSON");
  gen_cmd->add_option("--svg", gen.svg, "Also write an SVG plot");

  RenderArgs ren;
  auto* ren_cmd = app.add_subcommand("render", "Render floor and ceiling horizon depth from a boundary");
  ren_cmd->add_option("boundary", ren.input, "Boundary JSON or directory of them")->required();
  ren_cmd->add_option("--m", ren.m, "Number of rays")->capture_default_str();
  ren_cmd->add_option("--out", ren.out, "Output depth JSON (directory for directory input)")->required();
  ren_cmd->add_option("--svg", ren.svg, "Also write an SVG plot");

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a layout to a horizon-depth map");
  fit_cmd->add_option("depth", fit.input, "Depth JSON or CSV, or a directory of JSON depth files")->required();
  fit_cmd->add_option("--config", fit.config, "Fit configuration JSON");
  fit_cmd->add_option("--out", fit.out, "Output result JSON (directory for directory input)")->required();
  fit_cmd->add_option("--svg", fit.svg, "Also write an SVG plot");

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "2D and 3D IoU of predicted against ground-truth layouts");
  eval_cmd->add_option("pred_dir", ev.pred_dir, "Predicted annotations or fit results")->required();
  eval_cmd->add_option("gt_dir", ev.gt_dir, "Ground-truth annotations")->required();
  eval_cmd->add_option("--out", ev.out, "Output report JSON")->required();

  AblateArgs ab;
  auto* ab_cmd = app.add_subcommand("ablate-m", "Approximation error of the ray count against a dense render");
  ab_cmd->add_option("annotations", ab.input, "Annotation JSON or directory of them")->required();
  ab_cmd->add_option("--m-list", ab.m_list, "Ray counts")->delimiter(',')->capture_default_str();
  ab_cmd->add_option("--reference-m", ab.reference_m, "Ray count of the reference render")->capture_default_str();
  ab_cmd->add_option("--out", ab.out, "Output table JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  if (gen_cmd->parsed()) return run_gen_gt(gen, g, std::cout, std::cerr);
  if (ren_cmd->parsed()) return run_render(ren, g, std::cout, std::cerr);
  if (fit_cmd->parsed()) return run_fit(fit, g, std::cout, std::cerr);
  if (eval_cmd->parsed()) return run_eval(ev, g, std::cout, std::cerr);
  if (ab_cmd->parsed()) return run_ablate(ab, g, std::cout, std::cerr);
  return kExitInput;
}
