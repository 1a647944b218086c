#include "compgame/dynamics.hpp"

#include <cmath>

#include "compgame/equilibrium.hpp"
#include "compgame/simplex.hpp"

namespace cg {

std::string to_string(DynamicsKind k) {
  switch (k) {
    case DynamicsKind::RD: return "rd";
    case DynamicsKind::BNN: return "bnn";
    case DynamicsKind::Smith: return "smith";
    case DynamicsKind::LP: return "lp";
    case DynamicsKind::GP: return "gp";
    case DynamicsKind::BR: return "br";
  }
  return "?";
}

DynamicsKind dynamics_from_string(const std::string& s) {
  if (s == "rd") return DynamicsKind::RD;
  if (s == "bnn") return DynamicsKind::BNN;
  if (s == "smith") return DynamicsKind::Smith;
  if (s == "lp") return DynamicsKind::LP;
  if (s == "gp") return DynamicsKind::GP;
  if (s == "br") return DynamicsKind::BR;
  throw SpecError("unknown dynamics kind '" + s + "'");
}

namespace {

inline double pos(double t) { return t > 0.0 ? t : 0.0; }

Vec field_block(DynamicsKind kind, const Vec& x, const Vec& phi) {
  const Eigen::Index n = x.size();
  switch (kind) {
    case DynamicsKind::RD: {
      const double mean = x.dot(phi);
      return x.array() * (phi.array() - mean);
    }
    case DynamicsKind::BNN: {
      const double mean = x.dot(phi);
      Vec excess(n);
      for (Eigen::Index p = 0; p < n; ++p) excess[p] = pos(phi[p] - mean);
      return excess - excess.sum() * x;
    }
    case DynamicsKind::Smith: {
      Vec v = Vec::Zero(n);
      for (Eigen::Index p = 0; p < n; ++p) {
        double in = 0.0;
        double out = 0.0;
        for (Eigen::Index q = 0; q < n; ++q) {
          in += x[q] * pos(phi[p] - phi[q]);
          out += pos(phi[q] - phi[p]);
        }
        v[p] = in - x[p] * out;
      }
      return v;
    }
    case DynamicsKind::LP:
      return project_tangent_cone(SimplexPoint(x), phi);
    case DynamicsKind::GP:
      return project_simplex(x + phi).weights() - x;
    case DynamicsKind::BR: {
      // lowest-indexed maximizer, 1e-9 tie band
      Eigen::Index best = 0;
      const double top = phi.maxCoeff();
      for (Eigen::Index p = 0; p < n; ++p)
        if (phi[p] >= top - 1e-9) {
          best = p;
          break;
        }
      Vec v = -x;
      v[best] += 1.0;
      return v;
    }
  }
  throw Error("unreachable dynamics kind");
}

}  // namespace

TangentVector field(DynamicsKind kind, const GameSpec& game,
                    const StrategyProfile& x) {
  const auto phi = evaluate(game, x);
  std::vector<Vec> blocks(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i)
    blocks[i] = field_block(kind, x[i].weights(), phi[i]);
  return TangentVector(std::move(blocks));
}

namespace {

// raw field on ambient blocks (RK4 stages may sit slightly off the
// simplex); the state is re-projected before each evaluation
std::vector<Vec> field_raw(DynamicsKind kind, const GameSpec& game,
                           const AmbientProfile& x) {
  const StrategyProfile xp = project_profile(x);
  const auto phi = evaluate(game, xp.ambient());
  std::vector<Vec> blocks(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i)
    blocks[i] = field_block(kind, xp[i].weights(), phi[i]);
  return blocks;
}

bool finite(const AmbientProfile& x) {
  for (const auto& b : x)
    if (!b.allFinite()) return false;
  return true;
}

}  // namespace

Trajectory integrate(
    DynamicsKind kind, const GameSpec& game, const StrategyProfile& x0,
    double dt, double t_end,
    const std::function<double(const StrategyProfile&)>& lyapunov) {
  if (!(dt > 0.0) || !(t_end >= dt))
    throw SpecError("integrate needs dt > 0 and t_end >= dt");

  Trajectory traj;
  traj.kind = kind;
  traj.dt = dt;

  StrategyProfile x = x0;
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  for (std::size_t k = 0; k <= steps; ++k) {
    TrajectoryStep step;
    step.t = static_cast<double>(k) * dt;
    step.x = x;
    const auto phi = evaluate(game, x);
    const TangentVector b = field(kind, game, x);
    step.field_norm = b.inf_norm();
    step.vi_residual = vi_residual(game, x);
    step.pc_inner.resize(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i)
      step.pc_inner[i] = b[i].dot(phi[i]);
    if (lyapunov) step.lyapunov = lyapunov(x);
    traj.steps.push_back(std::move(step));

    if (b.inf_norm() <= kRestTol) {
      traj.reached_rest = true;
      break;
    }
    if (k == steps) break;

    // classical RK4
    const AmbientProfile y0 = x.ambient();
    auto axpy = [&](const AmbientProfile& base, double c,
                    const std::vector<Vec>& d) {
      AmbientProfile out = base;
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * d[i];
      return out;
    };
    const auto k1 = field_raw(kind, game, y0);
    const auto k2 = field_raw(kind, game, axpy(y0, 0.5 * dt, k1));
    const auto k3 = field_raw(kind, game, axpy(y0, 0.5 * dt, k2));
    const auto k4 = field_raw(kind, game, axpy(y0, dt, k3));
    AmbientProfile y1 = y0;
    for (std::size_t i = 0; i < y1.size(); ++i)
      y1[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (!finite(y1)) {
      traj.aborted = true;
      break;
    }
    x = project_profile(y1);
  }
  return traj;
}

std::vector<double> check_pc(DynamicsKind kind, const GameSpec& game,
                             const StrategyProfile& x) {
  const auto phi = evaluate(game, x);
  const TangentVector b = field(kind, game, x);
  std::vector<double> out(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) out[i] = b[i].dot(phi[i]);
  return out;
}

StationarityReport check_nash_stationarity(
    DynamicsKind kind, const GameSpec& game,
    const std::vector<StrategyProfile>& samples, double tol) {
  StationarityReport rep;
  for (const auto& x : samples) {
    const double bn = field(kind, game, x).inf_norm();
    const double vi = vi_residual(game, x);
    const bool rest = bn <= tol;
    const bool eq = vi <= tol;

    bool interior = true;
    for (const auto& blk : x.blocks())
      interior = interior && blk.weights().minCoeff() >= 1e-3;
    if (kind == DynamicsKind::RD && rest && !interior) {
      // RD boundary rest points need not be equilibria
      ++rep.skipped_boundary;
      ++rep.checked;
      if (eq != rest) continue;  // fine either way on the boundary
      continue;
    }

    ++rep.checked;
    if (eq && !rest) {
      rep.pass = false;
      rep.worst_field_norm_at_eq = std::max(rep.worst_field_norm_at_eq, bn);
    }
    if (rest && !eq) {
      rep.pass = false;
      rep.worst_residual_at_rest = std::max(rep.worst_residual_at_rest, vi);
    }
  }
  return rep;
}

}  // namespace cg
