#include <doctest.h>

#include <random>

#include "compgame/equilibrium.hpp"
#include "compgame/spec_io.hpp"
#include "zoo.hpp"

using namespace cg;

namespace {

StrategyProfile profile2(double a1, double b1) {
  return StrategyProfile({SimplexPoint(Vec{{a1, 1.0 - a1}}),
                          SimplexPoint(Vec{{b1, 1.0 - b1}})});
}

}  // namespace

TEST_CASE("two-route population game payoff at the all-on-route-1 profile") {
  const auto spec = load_builtin("two-arc-population");
  const auto phi = evaluate(spec.game, profile2(1.0, 1.0));
  // route 1 carries total mass 1 -> cost 1; route 2 has constant cost 1
  for (const auto& block : phi) {
    CHECK(block[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(block[1] == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("payoff table extension is multilinear and symmetric at uniform") {
  GameSpec game;
  for (int i = 1; i <= 2; ++i) {
    Participant p;
    p.id = "g" + std::to_string(i);
    p.category = Category::AtomicNonSplittable;
    p.choices = {"a", "b"};
    game.participants.push_back(std::move(p));
  }
  // identity payoffs: 1 when both match, 0 otherwise
  game.evaluators.push_back(VectorPayoffTable{{1, 0, 0, 1}});
  game.evaluators.push_back(VectorPayoffTable{{1, 0, 0, 1}});
  const auto phi = evaluate(game, profile2(0.5, 0.5));
  for (const auto& block : phi) {
    CHECK(block[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(block[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
  // multilinearity: vertex opponents reproduce table rows
  const auto phi_v = evaluate(game, profile2(0.5, 1.0));
  CHECK(phi_v[0][0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(phi_v[0][1] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("splittable gradient components equalize at the interior optimum") {
  const auto spec = load_builtin("two-arc-splittable");
  const auto phi = evaluate(spec.game, profile2(2.0 / 3.0, 2.0 / 3.0));
  for (const auto& block : phi)
    CHECK(std::abs(block[0] - block[1]) <= 1e-8);
}

TEST_CASE("analytic splittable gradients agree with finite differences") {
  const auto spec = load_builtin("two-arc-splittable");
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    const StrategyProfile x = sample_profile(spec.game.block_sizes(), rng);
    for (std::size_t i = 0; i < spec.game.participants.size(); ++i)
      CHECK(gradient_consistency(spec.game, i, x) <= 1e-5);
  }
  const auto mixed = load_builtin("affine-parallel");
  for (int k = 0; k < 50; ++k) {
    const StrategyProfile x = sample_profile(mixed.game.block_sizes(), rng);
    for (std::size_t i = 0; i < mixed.game.participants.size(); ++i)
      CHECK(gradient_consistency(mixed.game, i, x) <= 1e-5);
  }
}

TEST_CASE("jacobian of a constant evaluation is zero") {
  const GameSpec game =
      zoo::constant_game({Vec{{2.0, -1.0}}, Vec{{0.0, 3.0, 1.0}}});
  std::mt19937_64 rng(9);
  const StrategyProfile x = sample_profile(game.block_sizes(), rng);
  CHECK(jacobian(game, x).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("jacobian recovers a linear evaluation map") {
  const Eigen::Index dim = 5;  // blocks 2 + 3
  std::mt19937_64 rng(10);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat A(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r)
    for (Eigen::Index c = 0; c < dim; ++c) A(r, c) = gauss(rng);
  GameSpec game;
  const std::vector<Eigen::Index> sizes{2, 3};
  Eigen::Index at = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    Participant p;
    p.id = "lin" + std::to_string(i + 1);
    for (Eigen::Index c = 0; c < sizes[i]; ++c)
      p.choices.push_back("c" + std::to_string(c + 1));
    game.participants.push_back(std::move(p));
    const Eigen::Index offset = at;
    const Eigen::Index n = sizes[i];
    game.evaluators.push_back(PopulationPayoffs{
        [A, offset, n](const AmbientProfile& x) {
          Vec flat(A.cols());
          Eigen::Index pos = 0;
          for (const auto& blk : x) {
            flat.segment(pos, blk.size()) = blk;
            pos += blk.size();
          }
          return Vec((-A * flat).segment(offset, n));
        }});
    at += n;
  }
  const StrategyProfile x = sample_profile(sizes, rng);
  const Mat J = jacobian(game, x);
  CHECK((J + A).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("affine routing game has NSD tangent Jacobian") {
  const auto spec = load_builtin("two-arc-population");
  std::mt19937_64 rng(11);
  for (int k = 0; k < 25; ++k) {
    const StrategyProfile x = sample_profile(spec.game.block_sizes(), rng);
    CHECK(tangent_jacobian_max_eig(spec.game, x) <= 1e-8);
  }
}

TEST_CASE("shape and finiteness violations name the participant") {
  GameSpec game;
  Participant p;
  p.id = "broken";
  p.choices = {"a", "b"};
  game.participants.push_back(p);
  game.evaluators.push_back(
      PopulationPayoffs{[](const AmbientProfile&) { return Vec::Zero(3); }});
  const StrategyProfile x = game.uniform_profile();
  CHECK_THROWS_WITH_AS(evaluate(game, x),
                       doctest::Contains("broken"), EvalError);

  GameSpec bad;
  bad.participants.push_back(p);
  bad.evaluators.push_back(PopulationPayoffs{[](const AmbientProfile&) {
    return Vec{{std::numeric_limits<double>::quiet_NaN(), 0.0}};
  }});
  CHECK_THROWS_AS(evaluate(bad, bad.uniform_profile()), EvalError);
}

TEST_CASE("potential block value and gradient plumbing") {
  const GameSpec game = zoo::anchored_game({Vec{{0.7, 0.3}}, Vec{{0.2, 0.8}}});
  const StrategyProfile x = game.uniform_profile();
  const AmbientProfile amb = x.ambient();
  CHECK(potential_value(game, amb) ==
        doctest::Approx(-0.5 * (2 * 0.04 + 2 * 0.09)).epsilon(1e-9));
  const Vec g = potential_gradient_flat(game, amb);
  // grad W = -(x - a)
  CHECK(g[0] == doctest::Approx(0.2).epsilon(1e-5));
  CHECK(g[3] == doctest::Approx(0.3).epsilon(1e-5));
}
