#ifndef COMPGAME_EQUILIBRIUM_HPP
#define COMPGAME_EQUILIBRIUM_HPP

#include <random>

#include "compgame/game.hpp"

namespace cg {

struct EquilibriumReport {
  double vi_residual = 0.0;          // sum_i (max_p Phi^i_p - <x^i, Phi^i>)
  double fixedpoint_residual = 0.0;  // || Pi_X[x + Phi(x)] - x ||
  double tangent_residual = 0.0;     // || Pi_{T_X(x)} Phi(x) ||
  std::vector<double> best_reply_gaps;
  bool verdict = false;
  bool inconclusive = false;  // some residual within 10x of tol
  double tol = kViTol;
};

double vi_residual(const GameSpec& game, const StrategyProfile& x);

EquilibriumReport equilibrium_representations(const GameSpec& game,
                                              const StrategyProfile& x,
                                              double tol = kViTol);

struct SneReport {
  bool pass = false;
  double worst_violation = 0.0;  // min over sampled y of <Phi(y), x - y>
  std::size_t vertices_checked = 0;
  std::size_t samples_checked = 0;
};

// Tests <Phi(y), x - y> >= -tol at all pure-profile vertices (when the
// product of choice-set sizes is at most 1e4) plus random profiles.
SneReport sne_check(const GameSpec& game, const StrategyProfile& x,
                    std::size_t samples, std::uint64_t seed = 0,
                    double tol = kViTol);

struct DissipativeReport {
  bool dissipative = false;
  bool strictly = false;  // margin < -delta on all sampled distinct pairs
  double worst_monotonicity = 0.0;   // max <Phi(x)-Phi(y), x-y> over pairs
  double max_tangent_eigenvalue = 0.0;  // max eig of sym tangent Jacobian
  double strict_margin = 1e-8;
};

DissipativeReport check_dissipative(const GameSpec& game, std::size_t pairs,
                                    std::uint64_t seed = 0,
                                    double tol = 1e-8);

// Max eigenvalue of the symmetrized Jacobian restricted to the product
// tangent space at x.
double tangent_jacobian_max_eig(const GameSpec& game,
                                const StrategyProfile& x);

struct PotentialReport {
  bool pass = false;
  // max over samples, participants, choice pairs of
  // | g^i_p - g^i_q | with g^i = grad_i W - mu^i Phi^i.
  double worst_defect = 0.0;
};

PotentialReport check_potential(const GameSpec& game, std::size_t x_samples,
                                std::uint64_t seed = 0, double tol = 1e-5);

struct MaximizeResult {
  StrategyProfile maximizer;
  double value = 0.0;
  double projected_gradient_norm = 0.0;
  bool converged = false;
  bool degenerate = false;  // flat potential, any feasible point
};

// Projected gradient ascent on W over X with Armijo backtracking.
MaximizeResult maximize_potential(const GameSpec& game,
                                  std::size_t restarts = 10,
                                  std::size_t max_iters = 20000,
                                  std::uint64_t seed = 0,
                                  std::size_t jobs = 1);

}  // namespace cg

#endif
