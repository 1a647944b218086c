#ifndef COMPGAME_TOOLS_RUN_HPP
#define COMPGAME_TOOLS_RUN_HPP

#include <optional>
#include <string>

namespace cg::cli {

struct RunConfig {
  std::string subcommand;  // simulate | equilibrium | verify-potential |
                           // verify-dissipative | lyapunov | paths
  std::string spec;        // file path or builtin:<name>
  std::string dynamics = "rd";
  double dt = 0.01;
  double t_end = 10.0;
  std::string init = "uniform";  // uniform | vertex:<idx> | dirichlet
  std::optional<std::uint64_t> seed;  // falls back to CG_SEED, then 0
  std::string out;                    // empty -> stdout
  double tol = 1e-8;
  std::size_t jobs = 1;
  std::string lyapunov;  // optional kind override for the lyapunov report
};

// Exit status: 0 PASS, 1 FAIL / numerical abort, 2 usage or IO error.
int run(const RunConfig& config);

}  // namespace cg::cli

#endif
