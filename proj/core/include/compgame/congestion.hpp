#ifndef COMPGAME_CONGESTION_HPP
#define COMPGAME_CONGESTION_HPP

#include <optional>
#include <variant>

#include "compgame/game.hpp"

namespace cg {

struct AffineCost {
  double b = 0.0;  // slope
  double d = 0.0;  // intercept
};

struct PolynomialCost {
  std::vector<double> coeffs;  // c0 + c1 m + c2 m^2 + ...
};

using ArcCost = std::variant<AffineCost, PolynomialCost>;

double arc_cost_value(const ArcCost& cost, double flow);

struct Arc {
  std::string tail;
  std::string head;
  ArcCost cost;
};

struct Network {
  std::vector<std::string> nodes;
  std::vector<Arc> arcs;

  void validate() const;
  bool all_affine() const;
  // All arcs share one origin and one destination (two-node network).
  bool parallel_links(const std::string& origin,
                      const std::string& destination) const;
};

using Path = std::vector<std::size_t>;  // arc indices along the path

struct RoutingDemand {
  std::string id;
  std::string origin;
  std::string destination;
  double weight = 1.0;
  Category category = Category::Population;
  std::vector<Path> paths;  // admissible path set; enumerated when empty
};

// All simple directed origin->destination paths, ordered lexicographically
// by arc indices.
std::vector<Path> enumerate_paths(const Network& network,
                                  const std::string& origin,
                                  const std::string& destination);

struct FlowState {
  Mat participant_arc_flows;  // f^i_a, participants x arcs
  Vec aggregate_arc_flow;     // f_a
};

// Arc flows induced by aggregate path usage z (z_p = m^i x^i_p summed
// over the participants sharing path p, here given per participant).
FlowState induced_flows(const Network& network,
                        const std::vector<RoutingDemand>& demands,
                        const AmbientProfile& x);

// c_p(z) = sum_{a in p} l_a(f_a) for each path of each participant.
std::vector<Vec> path_costs(const Network& network,
                            const std::vector<RoutingDemand>& demands,
                            const AmbientProfile& x);

// Assembles the composite game: population blocks get -E[c_p], splittable
// blocks -grad of the expected cost, non-splittable blocks the expected
// cost of each own pure path, with the expectation running over the pure
// profiles of all non-splittable participants. When the network is
// parallel-link with affine costs, the potential of the quadratic form
// below is attached with mu^i = m^i.
GameSpec build_composite_congestion_game(const Network& network,
                                         std::vector<RoutingDemand> demands);

inline constexpr std::size_t kPureProfileCap = 1000000;

// W(x) for affine parallel-link networks.
double affine_parallel_potential(const Network& network,
                                 const std::vector<RoutingDemand>& demands,
                                 const AmbientProfile& x);

struct ConvexityReport {
  bool pass = false;
  bool inconclusive = false;  // cost-function preconditions not certified
  double worst_violation = 0.0;
};

// Midpoint convexity of u^i(., x^-i) on sampled segments.
ConvexityReport check_splittable_convexity(
    const Network& network, const std::vector<RoutingDemand>& demands,
    std::size_t samples, std::uint64_t seed = 0,
    bool assume_convex_costs = true);

}  // namespace cg

#endif
