#ifndef COMPGAME_LYAPUNOV_HPP
#define COMPGAME_LYAPUNOV_HPP

#include <optional>

#include "compgame/dynamics.hpp"

namespace cg {

enum class LyapunovKind {
  Potential,           // W(x), increases along PC dynamics
  RelativeEntropy,     // sum x*_p ln(x*_p / x_p), needs anchor
  BnnExcess,           // 1/2 sum [Phi_p - mean]^+ squared
  SmithPairwise,       // sum_p,q x_p ([Phi_q - Phi_p]^+)^2
  HalfSquaredDistance, // 1/2 ||x - x*||^2, needs anchor
  GpRegularizedGap,    // 1/2||Phi||^2 - 1/2||Pi_X(x+Phi)-(x+Phi)||^2
  BrGap,               // sup_y <y - x, Phi(x)>, equals the VI residual
};

std::string to_string(LyapunovKind k);
LyapunovKind lyapunov_from_string(const std::string& s);

bool lyapunov_needs_anchor(LyapunovKind k);
// True when the kind increases along trajectories (only Potential).
bool lyapunov_increasing(LyapunovKind k);
// The dynamics each Lyapunov function is certified against.
DynamicsKind certified_dynamics(LyapunovKind k);

double lyapunov_value(LyapunovKind kind, const GameSpec& game,
                      const StrategyProfile& x,
                      const std::optional<StrategyProfile>& anchor = {});

struct MonotonicityReport {
  bool pass = false;
  double max_adverse_step = 0.0;  // worst change in the wrong direction
  double value_start = 0.0;
  double value_end = 0.0;
  bool certified_pairing = false;  // trajectory dynamics matches the kind
  std::size_t out_of_domain_steps = 0;  // entropy support violations
};

MonotonicityReport monotonicity_report(
    LyapunovKind kind, const GameSpec& game, const Trajectory& traj,
    const std::optional<StrategyProfile>& anchor = {});

}  // namespace cg

#endif
