#ifndef COMPGAME_SIMPLEX_HPP
#define COMPGAME_SIMPLEX_HPP

#include <random>

#include "compgame/types.hpp"

namespace cg {

// Euclidean projection onto the probability simplex (sort-and-threshold,
// exact KKT solution).
SimplexPoint project_simplex(const Vec& v);

// Euclidean projection of v onto the tangent cone of the simplex at x:
//   T(x) = { z : sum_p z_p = 0, z_p >= 0 whenever x_p <= kActiveEps }.
// Solved by monotone bisection on the KKT multiplier.
Vec project_tangent_cone(const SimplexPoint& x, const Vec& v);

// Blockwise versions over a whole profile.
StrategyProfile project_profile(const AmbientProfile& v);
TangentVector project_tangent_profile(const StrategyProfile& x,
                                      const std::vector<Vec>& v);

// Dirichlet(1) sample, i.e. uniform on the simplex.
SimplexPoint sample_simplex(Eigen::Index n, std::mt19937_64& rng);
StrategyProfile sample_profile(const std::vector<Eigen::Index>& sizes,
                               std::mt19937_64& rng);

}  // namespace cg

#endif
