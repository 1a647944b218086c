#include "run.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "compgame/equilibrium.hpp"
#include "compgame/lyapunov.hpp"
#include "compgame/simplex.hpp"
#include "compgame/spec_io.hpp"

namespace cg::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::uint64_t resolve_seed(const RunConfig& config) {
  if (config.seed) return *config.seed;
  if (const char* env = std::getenv("CG_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0') return v;
    throw SpecError("CG_SEED is not an unsigned integer");
  }
  return 0;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

StrategyProfile initial_profile(const GameSpec& game, const std::string& init,
                                std::uint64_t seed) {
  const auto sizes = game.block_sizes();
  if (init == "uniform") return game.uniform_profile();
  if (init == "dirichlet") {
    std::mt19937_64 rng(seed);
    return sample_profile(sizes, rng);
  }
  if (init.rfind("vertex:", 0) == 0) {
    std::size_t idx = 0;
    try {
      idx = std::stoull(init.substr(7));
    } catch (const std::exception&) {
      throw SpecError("bad vertex index in --init '" + init + "'");
    }
    // mixed-radix pure-profile index, last participant fastest
    std::size_t total = 1;
    for (auto n : sizes) total *= static_cast<std::size_t>(n);
    if (idx >= total)
      throw SpecError("vertex index " + std::to_string(idx) +
                      " out of range (game has " + std::to_string(total) +
                      " pure profiles)");
    std::vector<SimplexPoint> blocks(sizes.size());
    for (std::size_t i = sizes.size(); i-- > 0;) {
      const auto n = static_cast<std::size_t>(sizes[i]);
      blocks[i] = SimplexPoint::vertex(sizes[i],
                                       static_cast<Eigen::Index>(idx % n));
      idx /= n;
    }
    return StrategyProfile(std::move(blocks));
  }
  throw SpecError("unknown --init mode '" + init + "'");
}

// temp file + rename so readers never observe a partial artifact
void write_atomic(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp + "' for writing");
    out << text;
    if (!out) throw Error("write to '" + tmp + "' failed");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("cannot rename '" + tmp + "' to '" + path + "'");
}

ordered_json report_header(const char* kind, const LoadedSpec& spec,
                           std::uint64_t seed, double tol) {
  ordered_json rep;
  rep["report"] = kind;
  rep["report_version"] = 1;
  rep["engine_version"] = kEngineVersion;
  rep["spec"] = spec.source;
  rep["spec_hash"] = spec.hash;
  rep["seed"] = seed;
  rep["tol"] = tol;
  return rep;
}

std::string trajectory_csv(const GameSpec& game, const Trajectory& traj) {
  std::ostringstream os;
  os << "t";
  for (const auto& p : game.participants)
    for (const auto& c : p.choices) os << ", " << p.id << "." << c;
  os << ", vi_residual, field_norm, lyapunov\n";
  for (const auto& step : traj.steps) {
    os << fmt(step.t);
    for (const auto& blk : step.x.blocks())
      for (Eigen::Index p = 0; p < blk.size(); ++p) os << ", " << fmt(blk[p]);
    os << ", " << fmt(step.vi_residual) << ", " << fmt(step.field_norm)
       << ", " << fmt(step.lyapunov ? *step.lyapunov : std::nan("")) << "\n";
  }
  return os.str();
}

int run_simulate(const RunConfig& config, const LoadedSpec& spec,
                 std::uint64_t seed) {
  const DynamicsKind kind = dynamics_from_string(config.dynamics);
  const StrategyProfile x0 =
      initial_profile(spec.game, config.init, seed);
  std::function<double(const StrategyProfile&)> lyap;
  if (spec.game.potential)
    lyap = [&](const StrategyProfile& x) {
      return potential_value(spec.game, x.ambient());
    };
  const Trajectory traj =
      integrate(kind, spec.game, x0, config.dt, config.t_end, lyap);
  write_atomic(config.out, trajectory_csv(spec.game, traj));
  if (traj.aborted) {
    std::cerr << "simulate: non-finite state at t = "
              << traj.steps.back().t << "; last valid step written\n";
    return 1;
  }
  return 0;
}

int run_equilibrium(const RunConfig& config, const LoadedSpec& spec,
                    std::uint64_t seed) {
  const StrategyProfile x = initial_profile(spec.game, config.init, seed);
  const EquilibriumReport rep =
      equilibrium_representations(spec.game, x, config.tol);
  ordered_json doc = report_header("equilibrium", spec, seed, config.tol);
  doc["profile"] = ordered_json::array();
  for (const auto& blk : x.blocks()) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index p = 0; p < blk.size(); ++p) row.push_back(blk[p]);
    doc["profile"].push_back(row);
  }
  doc["vi_residual"] = rep.vi_residual;
  doc["fixedpoint_residual"] = rep.fixedpoint_residual;
  doc["tangent_residual"] = rep.tangent_residual;
  doc["best_reply_gaps"] = rep.best_reply_gaps;
  doc["verdict"] = rep.verdict ? "PASS" : "FAIL";
  doc["inconclusive"] = rep.inconclusive;
  write_atomic(config.out, doc.dump(2) + "\n");
  return rep.verdict ? 0 : 1;
}

int run_verify_potential(const RunConfig& config, const LoadedSpec& spec,
                         std::uint64_t seed) {
  if (!spec.game.potential)
    throw SpecError("spec '" + spec.source + "' carries no potential block");
  const PotentialReport rep = check_potential(spec.game, 100, seed, 1e-5);
  ordered_json doc = report_header("verify-potential", spec, seed, 1e-5);
  doc["samples"] = 100;
  doc["worst_defect"] = rep.worst_defect;
  doc["verdict"] = rep.pass ? "PASS" : "FAIL";
  write_atomic(config.out, doc.dump(2) + "\n");
  return rep.pass ? 0 : 1;
}

int run_verify_dissipative(const RunConfig& config, const LoadedSpec& spec,
                           std::uint64_t seed) {
  const DissipativeReport rep =
      check_dissipative(spec.game, 200, seed, config.tol);
  ordered_json doc =
      report_header("verify-dissipative", spec, seed, config.tol);
  doc["pairs"] = 200;
  doc["worst_monotonicity"] = rep.worst_monotonicity;
  doc["max_tangent_eigenvalue"] = rep.max_tangent_eigenvalue;
  doc["strictly"] = rep.strictly;
  doc["verdict"] = rep.dissipative ? "PASS" : "FAIL";
  write_atomic(config.out, doc.dump(2) + "\n");
  return rep.dissipative ? 0 : 1;
}

LyapunovKind default_lyapunov(const GameSpec& game, DynamicsKind kind) {
  if (game.potential) return LyapunovKind::Potential;
  switch (kind) {
    case DynamicsKind::BNN: return LyapunovKind::BnnExcess;
    case DynamicsKind::Smith: return LyapunovKind::SmithPairwise;
    case DynamicsKind::GP: return LyapunovKind::GpRegularizedGap;
    default: return LyapunovKind::BrGap;
  }
}

int run_lyapunov(const RunConfig& config, const LoadedSpec& spec,
                 std::uint64_t seed) {
  const DynamicsKind dyn = dynamics_from_string(config.dynamics);
  const LyapunovKind kind = config.lyapunov.empty()
                                ? default_lyapunov(spec.game, dyn)
                                : lyapunov_from_string(config.lyapunov);
  const StrategyProfile x0 = initial_profile(spec.game, config.init, seed);
  const Trajectory traj =
      integrate(dyn, spec.game, x0, config.dt, config.t_end);
  std::optional<StrategyProfile> anchor;
  if (lyapunov_needs_anchor(kind)) anchor = traj.terminal();
  const MonotonicityReport rep =
      monotonicity_report(kind, spec.game, traj, anchor);
  ordered_json doc = report_header("lyapunov", spec, seed, config.tol);
  doc["dynamics"] = to_string(dyn);
  doc["lyapunov"] = to_string(kind);
  doc["anchor"] = lyapunov_needs_anchor(kind) ? "terminal state" : "none";
  doc["value_start"] = rep.value_start;
  doc["value_end"] = rep.value_end;
  doc["max_adverse_step"] = rep.max_adverse_step;
  doc["certified_pairing"] = rep.certified_pairing;
  doc["out_of_domain_steps"] = rep.out_of_domain_steps;
  doc["verdict"] = rep.pass ? "PASS" : "FAIL";
  write_atomic(config.out, doc.dump(2) + "\n");
  return rep.pass ? 0 : 1;
}

int run_paths(const RunConfig& config, const LoadedSpec& spec,
              std::uint64_t seed) {
  if (!spec.network)
    throw SpecError("spec '" + spec.source + "' has no network block");
  ordered_json doc = report_header("paths", spec, seed, config.tol);
  doc["demands"] = ordered_json::array();
  for (const auto& dem : spec.demands) {
    ordered_json d;
    d["id"] = dem.id;
    d["origin"] = dem.origin;
    d["destination"] = dem.destination;
    d["paths"] = dem.paths.empty()
                     ? enumerate_paths(*spec.network, dem.origin,
                                       dem.destination)
                     : dem.paths;
    doc["demands"].push_back(std::move(d));
  }
  write_atomic(config.out, doc.dump(2) + "\n");
  return 0;
}

}  // namespace

int run(const RunConfig& config) {
  try {
    if (!(config.dt > 0.0) || !(config.t_end >= config.dt))
      throw SpecError("need dt > 0 and t_end >= dt");
    const LoadedSpec spec = load_spec(config.spec);
    const std::uint64_t seed = resolve_seed(config);
    if (config.subcommand == "simulate")
      return run_simulate(config, spec, seed);
    if (config.subcommand == "equilibrium")
      return run_equilibrium(config, spec, seed);
    if (config.subcommand == "verify-potential")
      return run_verify_potential(config, spec, seed);
    if (config.subcommand == "verify-dissipative")
      return run_verify_dissipative(config, spec, seed);
    if (config.subcommand == "lyapunov")
      return run_lyapunov(config, spec, seed);
    if (config.subcommand == "paths") return run_paths(config, spec, seed);
    throw SpecError("unknown subcommand '" + config.subcommand + "'");
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace cg::cli
