#include <doctest.h>

#include <random>

#include "compgame/congestion.hpp"
#include "compgame/equilibrium.hpp"
#include "compgame/spec_io.hpp"
#include "zoo.hpp"

using namespace cg;

namespace {

Network two_route_net() {
  Network net;
  net.nodes = {"o", "d"};
  net.arcs.push_back({"o", "d", AffineCost{1.0, 0.0}});
  net.arcs.push_back({"o", "d", AffineCost{0.0, 1.0}});
  return net;
}

RoutingDemand demand(const std::string& id, double weight, Category cat) {
  RoutingDemand dem;
  dem.id = id;
  dem.origin = "o";
  dem.destination = "d";
  dem.weight = weight;
  dem.category = cat;
  return dem;
}

StrategyProfile profile2(double a1, double b1) {
  return StrategyProfile({SimplexPoint(Vec{{a1, 1.0 - a1}}),
                          SimplexPoint(Vec{{b1, 1.0 - b1}})});
}

}  // namespace

TEST_CASE("path enumeration on canonical graphs") {
  CHECK(enumerate_paths(two_route_net(), "o", "d").size() == 2);

  Network diamond;
  diamond.nodes = {"o", "a", "b", "d"};
  diamond.arcs.push_back({"o", "a", AffineCost{1.0, 0.0}});
  diamond.arcs.push_back({"o", "b", AffineCost{1.0, 0.0}});
  diamond.arcs.push_back({"a", "d", AffineCost{1.0, 0.0}});
  diamond.arcs.push_back({"b", "d", AffineCost{1.0, 0.0}});
  const auto paths = enumerate_paths(diamond, "o", "d");
  REQUIRE(paths.size() == 2);
  CHECK(paths[0] == Path{0, 2});
  CHECK(paths[1] == Path{1, 3});

  // a cycle hanging off the routes must not change the path set
  Network cyclic = diamond;
  cyclic.nodes.push_back("c");
  cyclic.arcs.push_back({"a", "c", AffineCost{1.0, 0.0}});
  cyclic.arcs.push_back({"c", "a", AffineCost{1.0, 0.0}});
  CHECK(enumerate_paths(cyclic, "o", "d") == paths);

  CHECK(enumerate_paths(diamond, "d", "o").empty());
}

TEST_CASE("path costs at worked configurations") {
  const Network net = two_route_net();
  std::vector<RoutingDemand> demands{demand("w", 1.0, Category::Population)};
  demands[0].paths = enumerate_paths(net, "o", "d");

  AmbientProfile all_on_1{Vec{{1.0, 0.0}}};
  const auto c1 = path_costs(net, demands, all_on_1);
  CHECK(c1[0][0] == doctest::Approx(1.0));
  CHECK(c1[0][1] == doctest::Approx(1.0));

  AmbientProfile all_on_2{Vec{{0.0, 1.0}}};
  const auto c2 = path_costs(net, demands, all_on_2);
  CHECK(c2[0][0] == doctest::Approx(0.0));  // zero flow on the affine arc
  CHECK(c2[0][1] == doctest::Approx(1.0));
}

TEST_CASE("three-arc costs match an arc-by-arc hand computation") {
  Network net;
  net.nodes = {"o", "d"};
  net.arcs.push_back({"o", "d", AffineCost{2.0, 0.5}});
  net.arcs.push_back({"o", "d", AffineCost{1.0, 1.0}});
  net.arcs.push_back({"o", "d", PolynomialCost{{0.25, 0.0, 3.0}}});
  std::vector<RoutingDemand> demands{
      demand("w1", 0.7, Category::Population),
      demand("w2", 0.3, Category::Population)};
  for (auto& dem : demands) dem.paths = enumerate_paths(net, "o", "d");

  std::mt19937_64 rng(81);
  for (int k = 0; k < 20; ++k) {
    const StrategyProfile x = sample_profile({3, 3}, rng);
    const AmbientProfile amb = x.ambient();
    Vec f = Vec::Zero(3);
    for (int i = 0; i < 2; ++i)
      for (int a = 0; a < 3; ++a) f[a] += demands[i].weight * amb[i][a];
    Vec want(3);
    want[0] = 2.0 * f[0] + 0.5;
    want[1] = 1.0 * f[1] + 1.0;
    want[2] = 0.25 + 3.0 * f[2] * f[2];
    const auto costs = path_costs(net, demands, amb);
    for (int i = 0; i < 2; ++i)
      CHECK((costs[i] - want).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("induced flows conserve mass and stay within total weight") {
  const Network net = two_route_net();
  std::vector<RoutingDemand> demands{
      demand("w1", 0.4, Category::Population),
      demand("w2", 0.35, Category::AtomicSplittable),
      demand("w3", 0.25, Category::AtomicNonSplittable)};
  for (auto& dem : demands) dem.paths = enumerate_paths(net, "o", "d");
  std::mt19937_64 rng(82);
  const double total = 1.0;
  for (int k = 0; k < 50; ++k) {
    const StrategyProfile x = sample_profile({2, 2, 2}, rng);
    const FlowState fs = induced_flows(net, demands, x.ambient());
    for (int i = 0; i < 3; ++i)
      CHECK(fs.participant_arc_flows.row(i).sum() ==
            doctest::Approx(demands[static_cast<std::size_t>(i)].weight)
                .epsilon(1e-12));
    const Vec resum = fs.participant_arc_flows.colwise().sum().transpose();
    CHECK((resum - fs.aggregate_arc_flow).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(fs.aggregate_arc_flow.minCoeff() >= -1e-12);
    CHECK(fs.aggregate_arc_flow.maxCoeff() <= total + 1e-12);
  }
}

TEST_CASE("costs depend on the profile only through the aggregate") {
  const Network net = two_route_net();
  std::vector<RoutingDemand> demands{
      demand("w1", 0.5, Category::Population),
      demand("w2", 0.5, Category::Population)};
  for (auto& dem : demands) dem.paths = enumerate_paths(net, "o", "d");
  // swap mass between the two equal-weight participants: same aggregate
  const AmbientProfile xa{Vec{{0.9, 0.1}}, Vec{{0.3, 0.7}}};
  const AmbientProfile xb{Vec{{0.3, 0.7}}, Vec{{0.9, 0.1}}};
  const auto ca = path_costs(net, demands, xa);
  const auto cb = path_costs(net, demands, xb);
  for (int i = 0; i < 2; ++i)
    CHECK((ca[i] - cb[i]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("assembly without non-splittable players is the direct evaluation") {
  const Network net = two_route_net();
  std::vector<RoutingDemand> demands{
      demand("w1", 0.5, Category::Population),
      demand("w2", 0.5, Category::AtomicSplittable)};
  const GameSpec game = build_composite_congestion_game(net, demands);
  std::mt19937_64 rng(83);
  std::vector<RoutingDemand> with_paths = demands;
  for (auto& dem : with_paths) dem.paths = enumerate_paths(net, "o", "d");
  for (int k = 0; k < 30; ++k) {
    const StrategyProfile x = sample_profile({2, 2}, rng);
    const auto phi = evaluate(game, x);
    const auto costs = path_costs(net, with_paths, x.ambient());
    CHECK((phi[0] + costs[0]).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("population payoffs under a non-splittable co-player average "
          "over that player's pure routes") {
  const auto three = load_builtin("three-category");
  REQUIRE(three.network.has_value());
  std::mt19937_64 rng(84);
  const std::size_t atom = 2;  // the non-splittable demand
  for (int k = 0; k < 30; ++k) {
    const StrategyProfile x = sample_profile({2, 2, 2}, rng);
    const auto phi = evaluate(three.game, x);
    // explicit two-term expectation over the atom's pure routes
    Vec expect = Vec::Zero(2);
    for (int s = 0; s < 2; ++s) {
      AmbientProfile pure = x.ambient();
      pure[atom] = Vec::Zero(2);
      pure[atom][s] = 1.0;
      const auto costs = path_costs(*three.network, three.demands, pure);
      expect -= x[atom][s] * costs[0];
    }
    CHECK((phi[0] - expect).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("pure-route equilibria of the two-player unsplittable instance") {
  const auto atom = load_builtin("two-arc-nonsplittable");
  for (double t : {0.0, 0.5, 1.0})
    CHECK(vi_residual(atom.game, profile2(1.0, t)) <= 1e-8);
  // both players on the costly constant route is not an equilibrium
  CHECK(vi_residual(atom.game, profile2(0.0, 0.0)) > 1e-3);
}

TEST_CASE("quadratic potential closed form on one population") {
  Network net = two_route_net();
  std::vector<RoutingDemand> demands{demand("w", 1.0, Category::Population)};
  demands[0].paths = enumerate_paths(net, "o", "d");
  for (double x1 : {0.0, 0.25, 0.5, 0.9, 1.0}) {
    const AmbientProfile x{Vec{{x1, 1.0 - x1}}};
    CHECK(affine_parallel_potential(net, demands, x) ==
          doctest::Approx(-(0.5 * x1 * x1 + (1.0 - x1))).epsilon(1e-12));
  }
  // zero weight: identically zero
  std::vector<RoutingDemand> none{demand("w", 0.0, Category::Population)};
  none[0].paths = demands[0].paths;
  const AmbientProfile x{Vec{{0.3, 0.7}}};
  CHECK(affine_parallel_potential(net, none, x) == doctest::Approx(0.0));
}

TEST_CASE("potential gradient reproduces weighted route costs") {
  // central differences of W in a population coordinate give -m c_a(z)
  Network net;
  net.nodes = {"o", "d"};
  net.arcs.push_back({"o", "d", AffineCost{1.5, 0.25}});
  net.arcs.push_back({"o", "d", AffineCost{0.5, 1.0}});
  net.arcs.push_back({"o", "d", AffineCost{2.0, 0.0}});
  std::vector<RoutingDemand> demands{
      demand("pop", 0.6, Category::Population),
      demand("atom", 0.4, Category::AtomicNonSplittable)};
  for (auto& dem : demands) dem.paths = enumerate_paths(net, "o", "d");

  std::mt19937_64 rng(85);
  std::uniform_int_distribution<int> route(0, 2);
  const double h = 1e-6;
  for (int k = 0; k < 20; ++k) {
    const int s = route(rng);
    AmbientProfile x{sample_simplex(3, rng).weights(), Vec::Zero(3)};
    x[1][s] = 1.0;  // pure-route co-player
    for (int a = 0; a < 3; ++a) {
      AmbientProfile hi = x;
      AmbientProfile lo = x;
      hi[0][a] += h;
      lo[0][a] -= h;
      const double dW = (affine_parallel_potential(net, demands, hi) -
                         affine_parallel_potential(net, demands, lo)) /
                        (2.0 * h);
      const FlowState fs = induced_flows(net, demands, x);
      const double cost =
          arc_cost_value(net.arcs[static_cast<std::size_t>(a)].cost,
                         fs.aggregate_arc_flow[a]);
      CHECK(-dW == doctest::Approx(0.6 * cost).epsilon(1e-5));
    }
  }
}

TEST_CASE("potential alignment and concavity on the assembled instance") {
  const auto par = load_builtin("affine-parallel");
  REQUIRE(par.game.potential.has_value());
  CHECK(check_potential(par.game, 100, 19).pass);

  // midpoint concavity of W on random segments -- this holds when only
  // population and splittable demands are present
  Network net;
  net.nodes = {"o", "d"};
  net.arcs.push_back({"o", "d", AffineCost{1.0, 0.0}});
  net.arcs.push_back({"o", "d", AffineCost{0.5, 0.5}});
  net.arcs.push_back({"o", "d", AffineCost{2.0, 0.25}});
  std::vector<RoutingDemand> smooth{
      demand("pop", 0.6, Category::Population),
      demand("split", 0.4, Category::AtomicSplittable)};
  for (auto& dem : smooth) dem.paths = enumerate_paths(net, "o", "d");
  std::mt19937_64 rng(86);
  for (int k = 0; k < 200; ++k) {
    AmbientProfile a{sample_simplex(3, rng).weights(),
                     sample_simplex(3, rng).weights()};
    AmbientProfile b{sample_simplex(3, rng).weights(),
                     sample_simplex(3, rng).weights()};
    AmbientProfile mid = a;
    for (std::size_t i = 0; i < mid.size(); ++i)
      mid[i] = 0.5 * (mid[i] + b[i]);
    const double wm = affine_parallel_potential(net, smooth, mid);
    const double wa = affine_parallel_potential(net, smooth, a);
    const double wb = affine_parallel_potential(net, smooth, b);
    CHECK(wm >= 0.5 * (wa + wb) - 1e-9);
  }

  // with a non-splittable atom sharing the network, W is not concave: the
  // mixed-term quadratic form is indefinite.  Two unit atoms on two linear
  // arcs give W = -2 at the split vertices but -2.5 at their midpoint.
  Network two;
  two.nodes = {"o", "d"};
  two.arcs.push_back({"o", "d", AffineCost{1.0, 0.0}});
  two.arcs.push_back({"o", "d", AffineCost{1.0, 0.0}});
  std::vector<RoutingDemand> atoms{
      demand("a1", 1.0, Category::AtomicNonSplittable),
      demand("a2", 1.0, Category::AtomicNonSplittable)};
  for (auto& dem : atoms) dem.paths = enumerate_paths(two, "o", "d");
  const AmbientProfile va{Vec{{1.0, 0.0}}, Vec{{0.0, 1.0}}};
  const AmbientProfile vb{Vec{{0.0, 1.0}}, Vec{{1.0, 0.0}}};
  const AmbientProfile vmid{Vec{{0.5, 0.5}}, Vec{{0.5, 0.5}}};
  const double wa = affine_parallel_potential(two, atoms, va);
  const double wb = affine_parallel_potential(two, atoms, vb);
  const double wm = affine_parallel_potential(two, atoms, vmid);
  CHECK(wa == doctest::Approx(-2.0));
  CHECK(wb == doctest::Approx(-2.0));
  CHECK(wm == doctest::Approx(-2.5));
  CHECK(wm < 0.5 * (wa + wb) - 0.4);
}

TEST_CASE("splittable stage costs are convex for convex arc costs") {
  const Network net = two_route_net();
  std::vector<RoutingDemand> demands{
      demand("s", 0.5, Category::AtomicSplittable),
      demand("pop", 0.5, Category::Population)};
  CHECK(check_splittable_convexity(net, demands, 100, 3).pass);

  Network cubic = net;
  cubic.arcs[0].cost = PolynomialCost{{0.0, 0.0, 0.0, 1.0}};
  const ConvexityReport c = check_splittable_convexity(cubic, demands, 100, 3);
  CHECK(c.pass);
  CHECK_FALSE(c.inconclusive);

  Network concave = net;
  concave.arcs[0].cost = PolynomialCost{{0.0, 2.0, -1.0}};  // 2m - m^2
  const ConvexityReport bad =
      check_splittable_convexity(concave, demands, 200, 3, false);
  CHECK_FALSE(bad.pass);
  CHECK(bad.worst_violation > 0.0);
}

TEST_CASE("the pure-profile expectation refuses to blow up") {
  const Network net = two_route_net();
  std::vector<RoutingDemand> demands;
  for (int i = 0; i < 21; ++i)
    demands.push_back(demand("a" + std::to_string(i), 1.0 / 21.0,
                             Category::AtomicNonSplittable));
  CHECK_THROWS_WITH_AS(build_composite_congestion_game(net, demands),
                       doctest::Contains("2097152"), SpecError);
}
