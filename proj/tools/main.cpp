#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using namespace tvg::cli;
  CLI::App app{"Total variation regularization and flow on oriented graphs"};
  app.require_subcommand(1);

  CommonOptions opts;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", opts.inputs, "Problem file (JSON)");
    sub->add_option("--instance", opts.instance, "Built-in instance: figure1, figure4");
    sub->add_option("--output", opts.output, "Output file (default: stdout)");
    sub->add_option("--flat-tol", opts.tol.flat_tol, "Relative flatness tolerance");
    sub->add_option("--solve-tol", opts.tol.solve_tol, "Solver optimality tolerance");
    sub->add_option("--event-tol", opts.tol.event_tol, "Breakpoint resolution");
  };

  std::optional<double> alpha, t_end;
  bool path_mode = false, full = false;
  auto* rof = app.add_subcommand("rof", "ROF minimizer at one alpha, or the whole path");
  add_common(rof);
  rof->add_option("--alpha", alpha, "Regularization weight");
  rof->add_flag("--path", path_mode, "Emit the piecewise-affine path");

  auto* flow = app.add_subcommand("flow", "Total variation flow");
  add_common(flow);
  flow->add_option("--t-end", t_end, "Final time");
  flow->add_flag("--full", full, "Run until stationary");

  std::vector<double> grid;
  auto* compare = app.add_subcommand("compare", "Compare ROF and the flow on an alpha grid");
  add_common(compare);
  compare->add_option("--grid", grid, "Alpha values")->delimiter(',')->required();

  std::string mode;
  double verify_alpha = 1.0;
  std::size_t batch = 20;
  std::uint64_t seed = 2024;
  auto* verify = app.add_subcommand("verify", "Run a verification protocol");
  add_common(verify);
  verify->add_option("--mode", mode, "phimin, isotropic or counterexample")
      ->required()
      ->check(CLI::IsMember({"phimin", "isotropic", "counterexample"}));
  verify->add_option("--alpha", verify_alpha, "Regularization weight (default 1)");
  verify->add_option("--batch", batch, "Random 3x3 fields when no input is given");
  verify->add_option("--seed", seed, "Seed for the random batch");

  auto* emit = app.add_subcommand("emit-instance", "Write a problem file");
  add_common(emit);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalidFlags;
  }

  if (rof->parsed()) return cmd_rof(opts, alpha, path_mode);
  if (flow->parsed()) return cmd_flow(opts, t_end, full);
  if (compare->parsed()) return cmd_compare(opts, grid);
  if (verify->parsed()) return cmd_verify(opts, mode, verify_alpha, batch, seed);
  return cmd_emit_instance(opts);
}
