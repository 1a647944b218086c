#ifndef COMPGAME_DYNAMICS_HPP
#define COMPGAME_DYNAMICS_HPP

#include <functional>
#include <optional>

#include "compgame/game.hpp"

namespace cg {

enum class DynamicsKind { RD, BNN, Smith, LP, GP, BR };

std::string to_string(DynamicsKind k);
DynamicsKind dynamics_from_string(const std::string& s);

inline constexpr double kRestTol = 1e-9;

// The vector field B_Phi(x) for the chosen dynamics. Every block sums
// to zero. BR selects the vertex of the lowest-indexed maximizing pure
// choice (tie band 1e-9 on Phi values).
TangentVector field(DynamicsKind kind, const GameSpec& game,
                    const StrategyProfile& x);

struct TrajectoryStep {
  double t = 0.0;
  StrategyProfile x;
  double vi_residual = 0.0;
  double field_norm = 0.0;  // sup norm of B_Phi(x)
  std::vector<double> pc_inner;  // <B^i, Phi^i> per participant
  std::optional<double> lyapunov;
};

struct Trajectory {
  DynamicsKind kind = DynamicsKind::RD;
  double dt = 0.0;
  std::vector<TrajectoryStep> steps;
  bool reached_rest = false;
  bool aborted = false;  // non-finite state encountered

  const StrategyProfile& terminal() const { return steps.back().x; }
};

// Classical fixed-step RK4 with a per-block simplex projection guard after
// every step; stops early once ||B(x)||_inf <= kRestTol.
Trajectory integrate(
    DynamicsKind kind, const GameSpec& game, const StrategyProfile& x0,
    double dt, double t_end,
    const std::function<double(const StrategyProfile&)>& lyapunov = {});

// Per-participant <B^i_Phi(x), Phi^i(x)>.
std::vector<double> check_pc(DynamicsKind kind, const GameSpec& game,
                             const StrategyProfile& x);

struct StationarityReport {
  bool pass = true;
  std::size_t checked = 0;
  std::size_t skipped_boundary = 0;  // RD samples excluded by interior filter
  double worst_field_norm_at_eq = 0.0;
  double worst_residual_at_rest = 0.0;
};

// Asserts ||B(x)|| <= tol  <=>  vi_residual(x) <= tol on the samples; for
// RD the reverse direction is only checked at interior samples
// (min component >= 1e-3).
StationarityReport check_nash_stationarity(
    DynamicsKind kind, const GameSpec& game,
    const std::vector<StrategyProfile>& samples, double tol = kViTol);

}  // namespace cg

#endif
