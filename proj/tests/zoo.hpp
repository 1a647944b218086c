// Shared game constructions and reference (oracle) implementations used
// across the test binaries. Oracles are deliberately naive: enumeration
// and brute force rather than the closed forms under test.
#ifndef COMPGAME_TESTS_ZOO_HPP
#define COMPGAME_TESTS_ZOO_HPP

#include <random>
#include <vector>

#include "compgame/dynamics.hpp"
#include "compgame/game.hpp"
#include "compgame/simplex.hpp"

namespace zoo {

using cg::AmbientProfile;
using cg::GameSpec;
using cg::StrategyProfile;
using cg::Vec;

// Phi^i(x) = a^i - x^i: strictly dissipative, unique equilibrium at the
// projection of a onto the product simplex; W = -1/2 sum ||x^i - a^i||^2
// with mu = 1.
inline GameSpec anchored_game(const std::vector<Vec>& anchors) {
  GameSpec game;
  game.name = "anchored";
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    cg::Participant p;
    p.id = "p" + std::to_string(i + 1);
    for (Eigen::Index c = 0; c < anchors[i].size(); ++c)
      p.choices.push_back("c" + std::to_string(c + 1));
    game.participants.push_back(std::move(p));
    const Vec a = anchors[i];
    game.evaluators.push_back(cg::PopulationPayoffs{
        [a, i](const AmbientProfile& x) { return Vec(a - x[i]); }});
  }
  cg::PotentialBlock pot;
  pot.potential = [anchors](const AmbientProfile& x) {
    double w = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      w -= 0.5 * (x[i] - anchors[i]).squaredNorm();
    return w;
  };
  pot.scale = [](const AmbientProfile&, std::size_t) { return 1.0; };
  game.potential = pot;
  return game;
}

// Constant evaluation: dissipative (zero monotonicity), equilibria form
// the faces spanned by maximizing choices.
inline GameSpec constant_game(const std::vector<Vec>& phis) {
  GameSpec game;
  game.name = "constant";
  for (std::size_t i = 0; i < phis.size(); ++i) {
    cg::Participant p;
    p.id = "p" + std::to_string(i + 1);
    for (Eigen::Index c = 0; c < phis[i].size(); ++c)
      p.choices.push_back("c" + std::to_string(c + 1));
    game.participants.push_back(std::move(p));
    const Vec v = phis[i];
    game.evaluators.push_back(
        cg::PopulationPayoffs{[v](const AmbientProfile&) { return v; }});
  }
  return game;
}

// Two-participant matching-pennies payoff tables (zero-sum, unique
// interior equilibrium at ((1/2,1/2),(1/2,1/2))). Not dissipative-strict;
// used for interior RD stationarity checks.
inline GameSpec matching_pennies() {
  GameSpec game;
  game.name = "matching-pennies";
  for (int i = 1; i <= 2; ++i) {
    cg::Participant p;
    p.id = i == 1 ? "even" : "odd";
    p.category = cg::Category::AtomicNonSplittable;
    p.choices = {"heads", "tails"};
    game.participants.push_back(std::move(p));
  }
  // flat order: (s1, s2), s2 fastest: HH, HT, TH, TT
  game.evaluators.push_back(cg::VectorPayoffTable{{1, -1, -1, 1}});
  game.evaluators.push_back(cg::VectorPayoffTable{{-1, 1, 1, -1}});
  return game;
}

// Exact simplex projection by active-set enumeration (2^n subsets).
inline Vec brute_project_simplex(const Vec& v) {
  const Eigen::Index n = v.size();
  double best = std::numeric_limits<double>::infinity();
  Vec best_z = Vec::Zero(n);
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<Eigen::Index> free;
    for (Eigen::Index p = 0; p < n; ++p)
      if (mask & (1u << p)) free.push_back(p);
    if (free.empty()) continue;
    double s = 0.0;
    for (auto p : free) s += v[p];
    const double shift = (s - 1.0) / static_cast<double>(free.size());
    Vec z = Vec::Zero(n);
    bool ok = true;
    for (auto p : free) {
      z[p] = v[p] - shift;
      ok = ok && z[p] >= -1e-12;
    }
    if (!ok) continue;
    const double d = (z - v).squaredNorm();
    if (d < best) {
      best = d;
      best_z = z;
    }
  }
  return best_z;
}

// Exact projection onto the tangent cone
//   T(x) = { z : sum z = 0, z_p >= 0 for p in A(x) }
// by enumerating which active constraints bind.
inline Vec brute_project_tangent_cone(const Vec& x, const Vec& v,
                                      double active_eps = 1e-9) {
  const Eigen::Index n = v.size();
  std::vector<Eigen::Index> active;
  for (Eigen::Index p = 0; p < n; ++p)
    if (x[p] <= active_eps) active.push_back(p);
  double best = std::numeric_limits<double>::infinity();
  Vec best_z = Vec::Zero(n);
  const auto na = active.size();
  for (unsigned mask = 0; mask < (1u << na); ++mask) {
    Vec z = v;
    std::vector<bool> pinned(n, false);
    Eigen::Index nfree = n;
    for (std::size_t k = 0; k < na; ++k)
      if (mask & (1u << k)) {
        pinned[active[k]] = true;
        z[active[k]] = 0.0;
        --nfree;
      }
    if (nfree == 0) continue;
    double s = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      if (!pinned[p]) s += z[p];
    const double shift = s / static_cast<double>(nfree);
    bool ok = true;
    for (Eigen::Index p = 0; p < n; ++p) {
      if (pinned[p]) continue;
      z[p] -= shift;
      if (x[p] <= active_eps && z[p] < -1e-12) ok = false;
    }
    if (!ok) continue;
    const double d = (z - v).squaredNorm();
    if (d < best) {
      best = d;
      best_z = z;
    }
  }
  return best_z;
}

// Independent fixed-step integrators built directly on the public field();
// used as references for the library integrator.
inline StrategyProfile euler_reference(cg::DynamicsKind kind,
                                       const GameSpec& game,
                                       StrategyProfile x, double dt,
                                       double t_end) {
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  for (std::size_t k = 0; k < steps; ++k) {
    const cg::TangentVector b = cg::field(kind, game, x);
    AmbientProfile y = x.ambient();
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += dt * b[i];
    x = cg::project_profile(y);
  }
  return x;
}

inline StrategyProfile rk4_reference(cg::DynamicsKind kind,
                                     const GameSpec& game, StrategyProfile x,
                                     double dt, double t_end) {
  auto f = [&](const AmbientProfile& y) {
    const StrategyProfile yp = cg::project_profile(y);
    const cg::TangentVector b = cg::field(kind, game, yp);
    return b.blocks();
  };
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt));
  for (std::size_t k = 0; k < steps; ++k) {
    const AmbientProfile y0 = x.ambient();
    auto axpy = [&](double c, const std::vector<Vec>& d) {
      AmbientProfile out = y0;
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * d[i];
      return out;
    };
    const auto k1 = f(y0);
    const auto k2 = f(axpy(0.5 * dt, k1));
    const auto k3 = f(axpy(0.5 * dt, k2));
    const auto k4 = f(axpy(dt, k3));
    AmbientProfile y1 = y0;
    for (std::size_t i = 0; i < y1.size(); ++i)
      y1[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    x = cg::project_profile(y1);
  }
  return x;
}

}  // namespace zoo

#endif
