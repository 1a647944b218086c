#include "compgame/lyapunov.hpp"

#include <cmath>

#include "compgame/equilibrium.hpp"
#include "compgame/simplex.hpp"

namespace cg {

std::string to_string(LyapunovKind k) {
  switch (k) {
    case LyapunovKind::Potential: return "potential";
    case LyapunovKind::RelativeEntropy: return "entropy";
    case LyapunovKind::BnnExcess: return "bnn-excess";
    case LyapunovKind::SmithPairwise: return "smith-pairwise";
    case LyapunovKind::HalfSquaredDistance: return "half-distance";
    case LyapunovKind::GpRegularizedGap: return "gp-gap";
    case LyapunovKind::BrGap: return "br-gap";
  }
  return "?";
}

LyapunovKind lyapunov_from_string(const std::string& s) {
  if (s == "potential") return LyapunovKind::Potential;
  if (s == "entropy") return LyapunovKind::RelativeEntropy;
  if (s == "bnn-excess") return LyapunovKind::BnnExcess;
  if (s == "smith-pairwise") return LyapunovKind::SmithPairwise;
  if (s == "half-distance") return LyapunovKind::HalfSquaredDistance;
  if (s == "gp-gap") return LyapunovKind::GpRegularizedGap;
  if (s == "br-gap") return LyapunovKind::BrGap;
  throw SpecError("unknown lyapunov kind '" + s + "'");
}

bool lyapunov_needs_anchor(LyapunovKind k) {
  return k == LyapunovKind::RelativeEntropy ||
         k == LyapunovKind::HalfSquaredDistance;
}

bool lyapunov_increasing(LyapunovKind k) {
  return k == LyapunovKind::Potential;
}

DynamicsKind certified_dynamics(LyapunovKind k) {
  switch (k) {
    case LyapunovKind::Potential: return DynamicsKind::RD;  // any PC dynamics
    case LyapunovKind::RelativeEntropy: return DynamicsKind::RD;
    case LyapunovKind::BnnExcess: return DynamicsKind::BNN;
    case LyapunovKind::SmithPairwise: return DynamicsKind::Smith;
    case LyapunovKind::HalfSquaredDistance: return DynamicsKind::LP;
    case LyapunovKind::GpRegularizedGap: return DynamicsKind::GP;
    case LyapunovKind::BrGap: return DynamicsKind::BR;
  }
  return DynamicsKind::RD;
}

namespace {

inline double pos(double t) { return t > 0.0 ? t : 0.0; }

void require_anchor(LyapunovKind kind,
                    const std::optional<StrategyProfile>& anchor) {
  if (lyapunov_needs_anchor(kind) && !anchor)
    throw SpecError("lyapunov kind '" + to_string(kind) +
                    "' requires an equilibrium anchor");
}

}  // namespace

double lyapunov_value(LyapunovKind kind, const GameSpec& game,
                      const StrategyProfile& x,
                      const std::optional<StrategyProfile>& anchor) {
  require_anchor(kind, anchor);
  switch (kind) {
    case LyapunovKind::Potential:
      return potential_value(game, x.ambient());
    case LyapunovKind::RelativeEntropy: {
      double h = 0.0;
      for (std::size_t i = 0; i < x.participants(); ++i) {
        const Vec& a = (*anchor)[i].weights();
        const Vec& w = x[i].weights();
        for (Eigen::Index p = 0; p < a.size(); ++p) {
          if (a[p] <= 0.0) continue;
          if (w[p] <= 0.0)
            throw DomainError(
                "relative entropy undefined: participant '" +
                game.participants[i].id + "' puts no mass on choice " +
                game.participants[i].choices[p]);
          h += a[p] * std::log(a[p] / w[p]);
        }
      }
      return h;
    }
    case LyapunovKind::BnnExcess: {
      const auto phi = evaluate(game, x);
      double h = 0.0;
      for (std::size_t i = 0; i < phi.size(); ++i) {
        const double mean = x[i].weights().dot(phi[i]);
        for (Eigen::Index p = 0; p < phi[i].size(); ++p) {
          const double e = pos(phi[i][p] - mean);
          h += 0.5 * e * e;
        }
      }
      return h;
    }
    case LyapunovKind::SmithPairwise: {
      const auto phi = evaluate(game, x);
      double h = 0.0;
      for (std::size_t i = 0; i < phi.size(); ++i) {
        const Vec& w = x[i].weights();
        for (Eigen::Index p = 0; p < phi[i].size(); ++p)
          for (Eigen::Index q = 0; q < phi[i].size(); ++q) {
            const double d = pos(phi[i][q] - phi[i][p]);
            h += w[p] * d * d;
          }
      }
      return h;
    }
    case LyapunovKind::HalfSquaredDistance: {
      const double d = distance(x, *anchor);
      return 0.5 * d * d;
    }
    case LyapunovKind::GpRegularizedGap: {
      // projection identity, never generic optimization
      const auto phi = evaluate(game, x);
      double h = 0.0;
      for (std::size_t i = 0; i < phi.size(); ++i) {
        const Vec target = x[i].weights() + phi[i];
        const Vec proj = project_simplex(target).weights();
        h += 0.5 * phi[i].squaredNorm() - 0.5 * (proj - target).squaredNorm();
      }
      return h;
    }
    case LyapunovKind::BrGap:
      return vi_residual(game, x);
  }
  throw Error("unreachable lyapunov kind");
}

MonotonicityReport monotonicity_report(
    LyapunovKind kind, const GameSpec& game, const Trajectory& traj,
    const std::optional<StrategyProfile>& anchor) {
  require_anchor(kind, anchor);
  if (traj.steps.empty()) throw SpecError("empty trajectory");

  MonotonicityReport rep;
  rep.certified_pairing = kind == LyapunovKind::Potential ||
                          certified_dynamics(kind) == traj.kind;
  const double sign = lyapunov_increasing(kind) ? -1.0 : 1.0;

  bool have_prev = false;
  double prev = 0.0;
  bool first = true;
  for (const auto& step : traj.steps) {
    double h = 0.0;
    try {
      h = lyapunov_value(kind, game, step.x, anchor);
    } catch (const DomainError&) {
      ++rep.out_of_domain_steps;
      have_prev = false;
      continue;
    }
    if (first) {
      rep.value_start = h;
      first = false;
    }
    rep.value_end = h;
    if (have_prev)
      rep.max_adverse_step = std::max(rep.max_adverse_step, sign * (h - prev));
    prev = h;
    have_prev = true;
  }
  const double tol = 1e-7 * (1.0 + std::abs(rep.value_start));
  rep.pass = rep.max_adverse_step <= tol;
  return rep;
}

}  // namespace cg
