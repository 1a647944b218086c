#ifndef COMPGAME_GAME_HPP
#define COMPGAME_GAME_HPP

#include <functional>
#include <memory>
#include <optional>
#include <variant>

#include "compgame/types.hpp"

namespace cg {

// F^i : X -> R^{S^i}, continuous payoff of each choice (population case).
using PayoffFn = std::function<Vec(const AmbientProfile&)>;

// Population participant: Phi^i = F^i.
struct PopulationPayoffs {
  PayoffFn payoff;
};

// Atomic splittable participant: Phi^i = grad_i H^i with
// H^i(x) = <x^i, F^i(x)>. The analytic gradient, when given, must match
// central finite differences of H^i.
struct SplittableGradient {
  PayoffFn payoff;
  PayoffFn analytic_gradient;  // optional, may be empty
};

// Atomic non-splittable participant: dense payoff table G^i on pure
// profiles, extended multilinearly. Phi^i_p = VG^i_p(x^{-i}).
struct VectorPayoffTable {
  // values[flat(s)] = G^i(s), row-major in participant order, i.e. the
  // last participant's choice index varies fastest.
  std::vector<double> values;
};

using Evaluator =
    std::variant<PopulationPayoffs, SplittableGradient, VectorPayoffTable>;

struct PotentialBlock {
  std::function<double(const AmbientProfile&)> potential;           // W(x)
  std::function<double(const AmbientProfile&, std::size_t)> scale;  // mu^i(x)
};

struct GameSpec {
  std::string name;
  std::string description;
  std::vector<Participant> participants;
  std::vector<Evaluator> evaluators;  // one per participant
  std::optional<PotentialBlock> potential;

  std::vector<Eigen::Index> block_sizes() const;
  Eigen::Index flat_dim() const;
  StrategyProfile uniform_profile() const;
  void validate() const;
};

// Phi(x), one vector per participant.
std::vector<Vec> evaluate(const GameSpec& game, const AmbientProfile& x);
std::vector<Vec> evaluate(const GameSpec& game, const StrategyProfile& x);

// Central finite-difference Jacobian of the flattened Phi, one-sided where
// a coordinate perturbation would leave [0, 1].
Mat jacobian(const GameSpec& game, const StrategyProfile& x);

// H^i(x) = <x^i, F^i(x)> for a splittable participant.
double splittable_payoff(const GameSpec& game, std::size_t i,
                         const AmbientProfile& x);

// Relative mismatch between the analytic gradient (if any) and central
// finite differences of H^i. Returns 0 for participants without one.
double gradient_consistency(const GameSpec& game, std::size_t i,
                            const StrategyProfile& x);

// W(x) and finite-difference grad W.
double potential_value(const GameSpec& game, const AmbientProfile& x);
Vec potential_gradient_flat(const GameSpec& game, const AmbientProfile& x);

}  // namespace cg

#endif
