#include <CLI11.hpp>

#include "run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"composite-game analysis toolkit"};
  app.require_subcommand(1);

  cg::cli::RunConfig config;
  std::uint64_t seed_value = 0;

  auto add_common = [&](CLI::App* sub, bool wants_dynamics) {
    sub->add_option("--spec", config.spec,
                    "spec file path or builtin:<name>")
        ->required();
    if (wants_dynamics)
      sub->add_option("--dynamics", config.dynamics,
                      "one of rd|bnn|smith|lp|gp|br");
    sub->add_option("--dt", config.dt, "integration step");
    sub->add_option("--t-end", config.t_end, "horizon");
    sub->add_option("--init", config.init,
                    "uniform | vertex:<idx> | dirichlet");
    sub->add_option("--seed", seed_value, "random seed (CG_SEED fallback)");
    sub->add_option("--out", config.out, "output path (default stdout)");
    sub->add_option("--tol", config.tol, "tolerance override");
    sub->add_option("--jobs", config.jobs, "parallel restarts/samples");
  };

  add_common(app.add_subcommand("simulate", "integrate a dynamics and emit "
                                            "a CSV trajectory"),
             true);
  add_common(app.add_subcommand("equilibrium",
                                "equilibrium residual report at a profile"),
             false);
  add_common(app.add_subcommand("verify-potential",
                                "potential alignment check"),
             false);
  add_common(app.add_subcommand("verify-dissipative",
                                "monotonicity / tangent-Jacobian check"),
             false);
  auto* lyap = app.add_subcommand(
      "lyapunov", "trajectory monotonicity report for a Lyapunov function");
  add_common(lyap, true);
  lyap->add_option("--lyapunov", config.lyapunov,
                   "potential|entropy|bnn-excess|smith-pairwise|"
                   "half-distance|gp-gap|br-gap");
  add_common(app.add_subcommand("paths", "list admissible routes per demand"),
             false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* sub = app.get_subcommands().front();
  config.subcommand = sub->get_name();
  if (sub->count("--seed") > 0) config.seed = seed_value;
  return cg::cli::run(config);
}
