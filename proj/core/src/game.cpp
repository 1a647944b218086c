#include "compgame/game.hpp"

#include <cmath>

namespace cg {

namespace {

constexpr double kFdStep = 1e-6;

std::vector<Eigen::Index> sizes_of(const std::vector<Participant>& ps) {
  std::vector<Eigen::Index> out;
  out.reserve(ps.size());
  for (const auto& p : ps)
    out.push_back(static_cast<Eigen::Index>(p.choices.size()));
  return out;
}

void check_block(const GameSpec& game, std::size_t i, const Vec& phi) {
  const auto& part = game.participants[i];
  if (phi.size() != static_cast<Eigen::Index>(part.choices.size()))
    throw EvalError("evaluation for participant '" + part.id +
                    "' has wrong shape " + std::to_string(phi.size()));
  for (Eigen::Index p = 0; p < phi.size(); ++p)
    if (!std::isfinite(phi[p]))
      throw EvalError("non-finite payoff for participant '" + part.id +
                      "', choice " + part.choices[p]);
}

// VG^i_p(x^{-i}) by explicit summation over pure profiles.
Vec table_payoff(const GameSpec& game, std::size_t i,
                 const VectorPayoffTable& table, const AmbientProfile& x) {
  const auto sizes = sizes_of(game.participants);
  const std::size_t n = sizes.size();
  std::size_t total = 1;
  for (auto s : sizes) total *= static_cast<std::size_t>(s);
  if (table.values.size() != total)
    throw SpecError("payoff table for participant '" +
                    game.participants[i].id + "' has " +
                    std::to_string(table.values.size()) + " entries, needs " +
                    std::to_string(total));

  Vec out = Vec::Zero(sizes[i]);
  std::vector<Eigen::Index> s(n, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    double w = 1.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) w *= x[j][s[j]];
    out[s[i]] += w * table.values[flat];
    // advance the mixed-radix counter, last participant fastest
    for (std::size_t j = n; j-- > 0;) {
      if (++s[j] < sizes[j]) break;
      s[j] = 0;
    }
  }
  return out;
}

}  // namespace

std::vector<Eigen::Index> GameSpec::block_sizes() const {
  return sizes_of(participants);
}

Eigen::Index GameSpec::flat_dim() const {
  Eigen::Index n = 0;
  for (const auto& p : participants)
    n += static_cast<Eigen::Index>(p.choices.size());
  return n;
}

StrategyProfile GameSpec::uniform_profile() const {
  std::vector<SimplexPoint> blocks;
  for (const auto& p : participants)
    blocks.push_back(
        SimplexPoint::uniform(static_cast<Eigen::Index>(p.choices.size())));
  return StrategyProfile(std::move(blocks));
}

void GameSpec::validate() const {
  if (participants.empty()) throw SpecError("game has no participants");
  if (evaluators.size() != participants.size())
    throw SpecError("game has " + std::to_string(evaluators.size()) +
                    " evaluators for " + std::to_string(participants.size()) +
                    " participants");
  for (const auto& p : participants) p.validate();
}

double splittable_payoff(const GameSpec& game, std::size_t i,
                         const AmbientProfile& x) {
  const auto* sg = std::get_if<SplittableGradient>(&game.evaluators[i]);
  if (sg == nullptr)
    throw EvalError("participant '" + game.participants[i].id +
                    "' is not splittable");
  return x[i].dot(sg->payoff(x));
}

namespace {

Vec splittable_fd_gradient(const GameSpec& game, std::size_t i,
                           const AmbientProfile& x) {
  AmbientProfile y = x;
  const Eigen::Index n = x[i].size();
  Vec g(n);
  for (Eigen::Index p = 0; p < n; ++p) {
    const double base = x[i][p];
    y[i][p] = base + kFdStep;
    const double hi = splittable_payoff(game, i, y);
    y[i][p] = base - kFdStep;
    const double lo = splittable_payoff(game, i, y);
    y[i][p] = base;
    g[p] = (hi - lo) / (2.0 * kFdStep);
  }
  return g;
}

}  // namespace

std::vector<Vec> evaluate(const GameSpec& game, const AmbientProfile& x) {
  if (x.size() != game.participants.size())
    throw EvalError("profile has " + std::to_string(x.size()) +
                    " blocks for " + std::to_string(game.participants.size()) +
                    " participants");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i].size() !=
        static_cast<Eigen::Index>(game.participants[i].choices.size()))
      throw EvalError("profile block for participant '" +
                      game.participants[i].id + "' has wrong shape");

  std::vector<Vec> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto& ev = game.evaluators[i];
    if (const auto* pop = std::get_if<PopulationPayoffs>(&ev)) {
      out[i] = pop->payoff(x);
    } else if (const auto* sg = std::get_if<SplittableGradient>(&ev)) {
      out[i] = sg->analytic_gradient ? sg->analytic_gradient(x)
                                     : splittable_fd_gradient(game, i, x);
    } else {
      out[i] = table_payoff(game, i, std::get<VectorPayoffTable>(ev), x);
    }
    check_block(game, i, out[i]);
  }
  return out;
}

std::vector<Vec> evaluate(const GameSpec& game, const StrategyProfile& x) {
  return evaluate(game, x.ambient());
}

double gradient_consistency(const GameSpec& game, std::size_t i,
                            const StrategyProfile& x) {
  const auto* sg = std::get_if<SplittableGradient>(&game.evaluators[i]);
  if (sg == nullptr || !sg->analytic_gradient) return 0.0;
  const AmbientProfile amb = x.ambient();
  const Vec ana = sg->analytic_gradient(amb);
  const Vec fd = splittable_fd_gradient(game, i, amb);
  return (ana - fd).norm() / std::max(1.0, fd.norm());
}

Mat jacobian(const GameSpec& game, const StrategyProfile& x) {
  const Eigen::Index dim = game.flat_dim();
  const AmbientProfile amb = x.ambient();
  double xmax = 0.0;
  for (const auto& b : amb) xmax = std::max(xmax, b.cwiseAbs().maxCoeff());
  const double h = kFdStep * std::max(1.0, xmax);

  auto eval_flat = [&](const AmbientProfile& y) {
    const auto phi = evaluate(game, y);
    Vec out(dim);
    Eigen::Index at = 0;
    for (const auto& b : phi) {
      out.segment(at, b.size()) = b;
      at += b.size();
    }
    return out;
  };

  Mat J(dim, dim);
  AmbientProfile y = amb;
  Eigen::Index col = 0;
  for (std::size_t j = 0; j < amb.size(); ++j) {
    for (Eigen::Index q = 0; q < amb[j].size(); ++q, ++col) {
      const double base = amb[j][q];
      // one-sided at the simplex boundary
      double hp = (base + h <= 1.0) ? h : 0.0;
      double hm = (base - h >= 0.0) ? h : 0.0;
      if (hp == 0.0 && hm == 0.0) hp = h;
      y[j][q] = base + hp;
      const Vec fhi = eval_flat(y);
      y[j][q] = base - hm;
      const Vec flo = eval_flat(y);
      y[j][q] = base;
      J.col(col) = (fhi - flo) / (hp + hm);
    }
  }
  return J;
}

double potential_value(const GameSpec& game, const AmbientProfile& x) {
  if (!game.potential)
    throw SpecError("game '" + game.name + "' has no potential block");
  return game.potential->potential(x);
}

Vec potential_gradient_flat(const GameSpec& game, const AmbientProfile& x) {
  const Eigen::Index dim = game.flat_dim();
  Vec g(dim);
  AmbientProfile y = x;
  Eigen::Index at = 0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    for (Eigen::Index q = 0; q < x[j].size(); ++q, ++at) {
      const double base = x[j][q];
      y[j][q] = base + kFdStep;
      const double hi = potential_value(game, y);
      y[j][q] = base - kFdStep;
      const double lo = potential_value(game, y);
      y[j][q] = base;
      g[at] = (hi - lo) / (2.0 * kFdStep);
    }
  }
  return g;
}

}  // namespace cg
