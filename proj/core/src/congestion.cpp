#include "compgame/congestion.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <map>
#include <memory>
#include <set>

namespace cg {

double arc_cost_value(const ArcCost& cost, double flow) {
  if (const auto* a = std::get_if<AffineCost>(&cost))
    return a->b * flow + a->d;
  const auto& poly = std::get<PolynomialCost>(cost).coeffs;
  double v = 0.0;
  for (std::size_t k = poly.size(); k-- > 0;) v = v * flow + poly[k];
  return v;
}

void Network::validate() const {
  std::set<std::string> node_set(nodes.begin(), nodes.end());
  if (node_set.size() != nodes.size())
    throw SpecError("network has duplicate node names");
  for (const auto& arc : arcs) {
    if (!node_set.count(arc.tail) || !node_set.count(arc.head))
      throw SpecError("arc " + arc.tail + "->" + arc.head +
                      " references an unknown node");
    if (const auto* a = std::get_if<AffineCost>(&arc.cost)) {
      if (a->b < 0.0 || a->d < 0.0)
        throw SpecError("affine arc cost needs b >= 0 and d >= 0");
    }
  }
}

bool Network::all_affine() const {
  for (const auto& arc : arcs)
    if (!std::holds_alternative<AffineCost>(arc.cost)) return false;
  return true;
}

bool Network::parallel_links(const std::string& origin,
                             const std::string& destination) const {
  for (const auto& arc : arcs)
    if (arc.tail != origin || arc.head != destination) return false;
  return !arcs.empty();
}

std::vector<Path> enumerate_paths(const Network& network,
                                  const std::string& origin,
                                  const std::string& destination) {
  if (origin == destination)
    throw SpecError("path enumeration needs origin != destination");
  std::map<std::string, std::vector<std::size_t>> out_arcs;
  for (std::size_t a = 0; a < network.arcs.size(); ++a)
    out_arcs[network.arcs[a].tail].push_back(a);

  std::vector<Path> paths;
  Path current;
  std::set<std::string> visited;
  // arcs explored in index order, so results come out lexicographically
  std::function<void(const std::string&)> dfs = [&](const std::string& node) {
    if (node == destination) {
      paths.push_back(current);
      return;
    }
    visited.insert(node);
    auto it = out_arcs.find(node);
    if (it != out_arcs.end()) {
      for (std::size_t a : it->second) {
        const std::string& next = network.arcs[a].head;
        if (visited.count(next)) continue;
        current.push_back(a);
        dfs(next);
        current.pop_back();
      }
    }
    visited.erase(node);
  };
  dfs(origin);
  return paths;
}

namespace {

std::string path_label(const Path& path) {
  std::string s;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k > 0) s += "+";
    s += "a" + std::to_string(path[k] + 1);
  }
  return s;
}

struct Context {
  Network net;
  std::vector<RoutingDemand> demands;
  std::vector<std::size_t> ns;  // indices of non-splittable participants
  double total_weight = 0.0;

  // aggregate arc flow induced by shares of populations and splittables
  // plus the pure choices s of the non-splittable participants
  Vec flows(const AmbientProfile& x, const std::vector<std::size_t>& s) const {
    Vec f = Vec::Zero(static_cast<Eigen::Index>(net.arcs.size()));
    for (std::size_t i = 0; i < demands.size(); ++i) {
      const auto& dem = demands[i];
      if (dem.category == Category::AtomicNonSplittable) continue;
      for (std::size_t p = 0; p < dem.paths.size(); ++p)
        for (std::size_t a : dem.paths[p])
          f[static_cast<Eigen::Index>(a)] += dem.weight * x[i][p];
    }
    for (std::size_t k = 0; k < ns.size(); ++k) {
      const auto& dem = demands[ns[k]];
      for (std::size_t a : dem.paths[s[k]])
        f[static_cast<Eigen::Index>(a)] += dem.weight;
    }
    return f;
  }

  Vec arc_costs(const Vec& f) const {
    Vec c(f.size());
    for (Eigen::Index a = 0; a < f.size(); ++a)
      c[a] = arc_cost_value(net.arcs[static_cast<std::size_t>(a)].cost, f[a]);
    return c;
  }

  double path_cost(std::size_t i, std::size_t p, const Vec& arc_cost) const {
    double c = 0.0;
    for (std::size_t a : demands[i].paths[p])
      c += arc_cost[static_cast<Eigen::Index>(a)];
    return c;
  }

  // runs fn(weight over other non-splittable factors, s) for every pure
  // profile s of the non-splittable participants; fixed iteration order
  // keeps the summation bitwise reproducible
  template <class Fn>
  void for_each_pure(Fn&& fn) const {
    std::vector<std::size_t> s(ns.size(), 0);
    while (true) {
      fn(s);
      bool done = true;
      for (std::size_t j = ns.size(); j-- > 0;) {
        if (++s[j] < demands[ns[j]].paths.size()) {
          done = false;
          break;
        }
        s[j] = 0;
      }
      if (done || ns.empty()) break;
    }
  }

  double weight_of(const AmbientProfile& x,
                   const std::vector<std::size_t>& s,
                   std::size_t skip = static_cast<std::size_t>(-1)) const {
    double w = 1.0;
    for (std::size_t k = 0; k < ns.size(); ++k)
      if (ns[k] != skip)
        w *= x[ns[k]][static_cast<Eigen::Index>(s[k])];
    return w;
  }
};

// expected cost of splittable participant i
double expected_splittable_cost(const Context& ctx, std::size_t i,
                                const AmbientProfile& x) {
  double u = 0.0;
  ctx.for_each_pure([&](const std::vector<std::size_t>& s) {
    const Vec c = ctx.arc_costs(ctx.flows(x, s));
    double us = 0.0;
    for (std::size_t q = 0; q < ctx.demands[i].paths.size(); ++q)
      us += x[i][static_cast<Eigen::Index>(q)] * ctx.path_cost(i, q, c);
    u += ctx.weight_of(x, s) * us;
  });
  return u;
}

}  // namespace

FlowState induced_flows(const Network& network,
                        const std::vector<RoutingDemand>& demands,
                        const AmbientProfile& x) {
  FlowState fs;
  const auto n_arcs = static_cast<Eigen::Index>(network.arcs.size());
  fs.participant_arc_flows =
      Mat::Zero(static_cast<Eigen::Index>(demands.size()), n_arcs);
  for (std::size_t i = 0; i < demands.size(); ++i)
    for (std::size_t p = 0; p < demands[i].paths.size(); ++p)
      for (std::size_t a : demands[i].paths[p])
        fs.participant_arc_flows(static_cast<Eigen::Index>(i),
                                 static_cast<Eigen::Index>(a)) +=
            demands[i].weight * x[i][static_cast<Eigen::Index>(p)];
  fs.aggregate_arc_flow = fs.participant_arc_flows.colwise().sum();
  return fs;
}

std::vector<Vec> path_costs(const Network& network,
                            const std::vector<RoutingDemand>& demands,
                            const AmbientProfile& x) {
  const FlowState fs = induced_flows(network, demands, x);
  double total = 0.0;
  for (const auto& d : demands) total += d.weight;
  for (Eigen::Index a = 0; a < fs.aggregate_arc_flow.size(); ++a)
    if (fs.aggregate_arc_flow[a] < -1e-9 ||
        fs.aggregate_arc_flow[a] > total + 1e-9)
      throw EvalError("aggregate flow outside [0, M] on arc " +
                      std::to_string(a));
  Vec costs(fs.aggregate_arc_flow.size());
  for (Eigen::Index a = 0; a < costs.size(); ++a)
    costs[a] = arc_cost_value(network.arcs[static_cast<std::size_t>(a)].cost,
                              fs.aggregate_arc_flow[a]);
  std::vector<Vec> out(demands.size());
  for (std::size_t i = 0; i < demands.size(); ++i) {
    out[i].resize(static_cast<Eigen::Index>(demands[i].paths.size()));
    for (std::size_t p = 0; p < demands[i].paths.size(); ++p) {
      double c = 0.0;
      for (std::size_t a : demands[i].paths[p])
        c += costs[static_cast<Eigen::Index>(a)];
      out[i][static_cast<Eigen::Index>(p)] = c;
    }
  }
  return out;
}

GameSpec build_composite_congestion_game(const Network& network,
                                         std::vector<RoutingDemand> demands) {
  network.validate();
  for (auto& dem : demands) {
    if (dem.paths.empty())
      dem.paths = enumerate_paths(network, dem.origin, dem.destination);
    if (dem.paths.empty())
      throw SpecError("participant '" + dem.id + "' has no " + dem.origin +
                      "->" + dem.destination + " path");
    if (!(dem.weight > 0.0))
      throw SpecError("participant '" + dem.id + "' has non-positive weight");
  }

  auto ctx = std::make_shared<Context>();
  ctx->net = network;
  ctx->demands = demands;
  std::size_t pure_count = 1;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    ctx->total_weight += demands[i].weight;
    if (demands[i].category == Category::AtomicNonSplittable) {
      ctx->ns.push_back(i);
      pure_count *= demands[i].paths.size();
    }
  }
  if (pure_count > kPureProfileCap)
    throw SpecError("pure-profile expectation needs " +
                    std::to_string(pure_count) + " terms, cap is " +
                    std::to_string(kPureProfileCap));

  GameSpec game;
  game.name = "congestion";
  for (const auto& dem : demands) {
    Participant part;
    part.id = dem.id;
    part.category = dem.category;
    part.weight = dem.weight;
    for (const auto& path : dem.paths) part.choices.push_back(path_label(path));
    game.participants.push_back(std::move(part));
  }

  const bool affine = network.all_affine();
  for (std::size_t i = 0; i < demands.size(); ++i) {
    const auto& dem = demands[i];
    switch (dem.category) {
      case Category::Population: {
        // Phi^i_p = -E_s[c_p(z_s)]
        game.evaluators.push_back(PopulationPayoffs{
            [ctx, i](const AmbientProfile& x) {
              Vec phi =
                  Vec::Zero(static_cast<Eigen::Index>(ctx->demands[i].paths.size()));
              ctx->for_each_pure([&](const std::vector<std::size_t>& s) {
                const Vec c = ctx->arc_costs(ctx->flows(x, s));
                const double w = ctx->weight_of(x, s);
                for (std::size_t p = 0; p < ctx->demands[i].paths.size(); ++p)
                  phi[static_cast<Eigen::Index>(p)] -=
                      w * ctx->path_cost(i, p, c);
              });
              return phi;
            }});
        break;
      }
      case Category::AtomicSplittable: {
        SplittableGradient sg;
        sg.payoff = [ctx, i](const AmbientProfile& x) {
          // F^i = -E_s[c^i(z_s)], so that H^i = <x^i, F^i> = -u^i
          Vec f = Vec::Zero(static_cast<Eigen::Index>(ctx->demands[i].paths.size()));
          ctx->for_each_pure([&](const std::vector<std::size_t>& s) {
            const Vec c = ctx->arc_costs(ctx->flows(x, s));
            const double w = ctx->weight_of(x, s);
            for (std::size_t q = 0; q < ctx->demands[i].paths.size(); ++q)
              f[static_cast<Eigen::Index>(q)] -= w * ctx->path_cost(i, q, c);
          });
          return f;
        };
        if (affine) {
          sg.analytic_gradient = [ctx, i](const AmbientProfile& x) {
            const auto& dem = ctx->demands[i];
            Vec phi = Vec::Zero(static_cast<Eigen::Index>(dem.paths.size()));
            // shared-arc quadratic couplings: sum over a in q and r of b_a
            std::vector<std::vector<double>> shared(
                dem.paths.size(), std::vector<double>(dem.paths.size(), 0.0));
            for (std::size_t q = 0; q < dem.paths.size(); ++q)
              for (std::size_t r = 0; r < dem.paths.size(); ++r)
                for (std::size_t a : dem.paths[q])
                  if (std::find(dem.paths[r].begin(), dem.paths[r].end(), a) !=
                      dem.paths[r].end())
                    shared[q][r] +=
                        std::get<AffineCost>(ctx->net.arcs[a].cost).b;
            ctx->for_each_pure([&](const std::vector<std::size_t>& s) {
              const Vec c = ctx->arc_costs(ctx->flows(x, s));
              const double w = ctx->weight_of(x, s);
              for (std::size_t q = 0; q < dem.paths.size(); ++q) {
                double grad = ctx->path_cost(i, q, c);
                for (std::size_t r = 0; r < dem.paths.size(); ++r)
                  grad += x[i][static_cast<Eigen::Index>(r)] * dem.weight *
                          shared[q][r];
                phi[static_cast<Eigen::Index>(q)] -= w * grad;
              }
            });
            return phi;
          };
        }
        game.evaluators.push_back(std::move(sg));
        break;
      }
      case Category::AtomicNonSplittable: {
        // Phi^i_p = -E_{s^{-i}}[c_p(z_{(p, s^{-i})})]
        game.evaluators.push_back(PopulationPayoffs{
            [ctx, i](const AmbientProfile& x) {
              const auto& dem = ctx->demands[i];
              std::size_t own = 0;
              while (ctx->ns[own] != i) ++own;
              Vec phi = Vec::Zero(static_cast<Eigen::Index>(dem.paths.size()));
              ctx->for_each_pure([&](const std::vector<std::size_t>& s) {
                const Vec c = ctx->arc_costs(ctx->flows(x, s));
                const double w = ctx->weight_of(x, s, i);
                phi[static_cast<Eigen::Index>(s[own])] -=
                    w * ctx->path_cost(i, s[own], c);
              });
              return phi;
            }});
        break;
      }
    }
  }

  // Affine parallel-link networks carry the quadratic potential, mu^i = m^i.
  bool parallel = false;
  if (affine && !demands.empty()) {
    parallel = network.parallel_links(demands[0].origin, demands[0].destination);
    for (const auto& dem : demands) {
      parallel = parallel && dem.origin == demands[0].origin &&
                 dem.destination == demands[0].destination;
      for (const auto& path : dem.paths) parallel = parallel && path.size() == 1;
    }
  }
  if (parallel) {
    const Network net = network;
    const std::vector<RoutingDemand> dems = demands;
    game.potential = PotentialBlock{
        [net, dems](const AmbientProfile& x) {
          return affine_parallel_potential(net, dems, x);
        },
        [dems](const AmbientProfile&, std::size_t i) {
          return dems[i].weight;
        }};
  }

  game.validate();
  return game;
}

double affine_parallel_potential(const Network& network,
                                 const std::vector<RoutingDemand>& demands,
                                 const AmbientProfile& x) {
  if (!network.all_affine())
    throw SpecError("parallel-link potential needs affine arc costs");
  if (demands.empty()) return 0.0;
  if (!network.parallel_links(demands[0].origin, demands[0].destination))
    throw SpecError("parallel-link potential needs a parallel network");

  Context ctx;
  ctx.net = network;
  ctx.demands = demands;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    for (const auto& path : demands[i].paths)
      if (path.size() != 1)
        throw SpecError("parallel-link potential needs single-arc paths");
    if (demands[i].category == Category::AtomicNonSplittable)
      ctx.ns.push_back(i);
  }

  const auto n_arcs = static_cast<Eigen::Index>(network.arcs.size());
  double w_total = 0.0;
  ctx.for_each_pure([&](const std::vector<std::size_t>& s) {
    const double w = ctx.weight_of(x, s);
    const Vec f = ctx.flows(x, s);
    double term = 0.0;
    for (Eigen::Index a = 0; a < n_arcs; ++a) {
      const auto& cost =
          std::get<AffineCost>(network.arcs[static_cast<std::size_t>(a)].cost);
      double quad = f[a] * f[a];
      for (std::size_t j = 0; j < demands.size(); ++j) {
        if (demands[j].category != Category::AtomicSplittable) continue;
        for (std::size_t p = 0; p < demands[j].paths.size(); ++p)
          if (demands[j].paths[p][0] == static_cast<std::size_t>(a)) {
            const double fj = demands[j].weight * x[j][static_cast<Eigen::Index>(p)];
            quad += fj * fj;
          }
      }
      for (std::size_t k = 0; k < ctx.ns.size(); ++k)
        if (demands[ctx.ns[k]].paths[s[k]][0] == static_cast<std::size_t>(a))
          quad += demands[ctx.ns[k]].weight * demands[ctx.ns[k]].weight;
      term += 0.5 * cost.b * quad + cost.d * f[a];
    }
    w_total -= w * term;
  });
  return w_total;
}

ConvexityReport check_splittable_convexity(
    const Network& network, const std::vector<RoutingDemand>& demands,
    std::size_t samples, std::uint64_t seed, bool assume_convex_costs) {
  Context ctx;
  ctx.net = network;
  std::vector<RoutingDemand> dems = demands;
  for (auto& dem : dems)
    if (dem.paths.empty())
      dem.paths = enumerate_paths(network, dem.origin, dem.destination);
  ctx.demands = dems;
  for (std::size_t i = 0; i < dems.size(); ++i)
    if (dems[i].category == Category::AtomicNonSplittable) ctx.ns.push_back(i);

  bool certified = assume_convex_costs;
  for (const auto& arc : network.arcs) {
    if (std::holds_alternative<AffineCost>(arc.cost)) continue;
    const auto& poly = std::get<PolynomialCost>(arc.cost).coeffs;
    for (double c : poly) certified = certified && c >= 0.0;
  }

  ConvexityReport rep;
  rep.worst_violation = 0.0;
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> exp1(1.0);
  auto draw_simplex = [&](std::size_t n) {
    Vec v(static_cast<Eigen::Index>(n));
    for (Eigen::Index p = 0; p < v.size(); ++p) v[p] = exp1(rng);
    return Vec(v / v.sum());
  };

  for (std::size_t k = 0; k < samples; ++k) {
    for (std::size_t i = 0; i < dems.size(); ++i) {
      if (dems[i].category != Category::AtomicSplittable) continue;
      AmbientProfile x(dems.size());
      for (std::size_t j = 0; j < dems.size(); ++j)
        x[j] = draw_simplex(dems[j].paths.size());
      const Vec a = draw_simplex(dems[i].paths.size());
      const Vec b = draw_simplex(dems[i].paths.size());
      auto u_at = [&](const Vec& xi) {
        AmbientProfile y = x;
        y[i] = xi;
        return expected_splittable_cost(ctx, i, y);
      };
      const double mid = u_at(0.5 * (a + b));
      const double avg = 0.5 * (u_at(a) + u_at(b));
      rep.worst_violation = std::max(rep.worst_violation, mid - avg);
    }
  }
  rep.pass = rep.worst_violation <= 1e-9;
  rep.inconclusive = !certified && rep.pass;
  return rep;
}

}  // namespace cg
