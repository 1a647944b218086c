#include "compgame/equilibrium.hpp"

#include <cmath>
#include <future>

#include "compgame/simplex.hpp"

namespace cg {

namespace {

std::vector<double> best_reply_gaps(const StrategyProfile& x,
                                    const std::vector<Vec>& phi) {
  std::vector<double> gaps(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i)
    gaps[i] = phi[i].maxCoeff() - x[i].weights().dot(phi[i]);
  return gaps;
}

// mixed-radix enumeration of all pure profiles; returns false if the count
// exceeds cap.
bool for_each_vertex(const std::vector<Eigen::Index>& sizes, std::size_t cap,
                     const std::function<void(const std::vector<Eigen::Index>&)>& fn) {
  std::size_t total = 1;
  for (auto n : sizes) {
    total *= static_cast<std::size_t>(n);
    if (total > cap) return false;
  }
  std::vector<Eigen::Index> s(sizes.size(), 0);
  for (std::size_t k = 0; k < total; ++k) {
    fn(s);
    for (std::size_t j = sizes.size(); j-- > 0;) {
      if (++s[j] < sizes[j]) break;
      s[j] = 0;
    }
  }
  return true;
}

StrategyProfile vertex_profile(const std::vector<Eigen::Index>& sizes,
                               const std::vector<Eigen::Index>& s) {
  std::vector<SimplexPoint> blocks;
  blocks.reserve(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i)
    blocks.push_back(SimplexPoint::vertex(sizes[i], s[i]));
  return StrategyProfile(std::move(blocks));
}

}  // namespace

double vi_residual(const GameSpec& game, const StrategyProfile& x) {
  const auto phi = evaluate(game, x);
  double r = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i)
    r += phi[i].maxCoeff() - x[i].weights().dot(phi[i]);
  return r;
}

EquilibriumReport equilibrium_representations(const GameSpec& game,
                                              const StrategyProfile& x,
                                              double tol) {
  const auto phi = evaluate(game, x);
  EquilibriumReport rep;
  rep.tol = tol;
  rep.best_reply_gaps = best_reply_gaps(x, phi);
  rep.vi_residual = 0.0;
  for (double g : rep.best_reply_gaps) rep.vi_residual += g;

  double fp2 = 0.0;
  double tc2 = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const Vec target = x[i].weights() + phi[i];
    fp2 += (project_simplex(target).weights() - x[i].weights()).squaredNorm();
    tc2 += project_tangent_cone(x[i], phi[i]).squaredNorm();
  }
  rep.fixedpoint_residual = std::sqrt(fp2);
  rep.tangent_residual = std::sqrt(tc2);
  rep.verdict = rep.vi_residual <= tol;
  auto near = [&](double r) { return r > tol && r <= 10.0 * tol; };
  rep.inconclusive = near(rep.vi_residual) || near(rep.fixedpoint_residual) ||
                     near(rep.tangent_residual);
  return rep;
}

SneReport sne_check(const GameSpec& game, const StrategyProfile& x,
                    std::size_t samples, std::uint64_t seed, double tol) {
  const auto sizes = game.block_sizes();
  SneReport rep;
  rep.worst_violation = std::numeric_limits<double>::infinity();

  auto visit = [&](const StrategyProfile& y) {
    const auto phi = evaluate(game, y);
    double v = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i)
      v += phi[i].dot(x[i].weights() - y[i].weights());
    rep.worst_violation = std::min(rep.worst_violation, v);
  };

  const bool enumerated = for_each_vertex(
      sizes, 10000, [&](const std::vector<Eigen::Index>& s) {
        visit(vertex_profile(sizes, s));
        ++rep.vertices_checked;
      });
  (void)enumerated;

  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < samples; ++k) {
    visit(sample_profile(sizes, rng));
    ++rep.samples_checked;
  }
  rep.pass = rep.worst_violation >= -tol;
  return rep;
}

double tangent_jacobian_max_eig(const GameSpec& game,
                                const StrategyProfile& x) {
  const Mat J = jacobian(game, x);
  const Mat S = 0.5 * (J + J.transpose());
  // orthonormal basis of the product tangent space, blockwise
  const auto sizes = game.block_sizes();
  Eigen::Index dim = 0;
  Eigen::Index tdim = 0;
  for (auto n : sizes) {
    dim += n;
    tdim += n - 1;
  }
  Mat B = Mat::Zero(dim, tdim);
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  for (auto n : sizes) {
    if (n > 1) {
      Mat D = Mat::Zero(n, n - 1);
      for (Eigen::Index k = 0; k < n - 1; ++k) {
        D(k, k) = 1.0;
        D(k + 1, k) = -1.0;
      }
      const Mat Q =
          Eigen::HouseholderQR<Mat>(D).householderQ() * Mat::Identity(n, n - 1);
      B.block(row, col, n, n - 1) = Q;
      col += n - 1;
    }
    row += n;
  }
  if (tdim == 0) return 0.0;
  const Mat M = B.transpose() * S * B;
  Eigen::SelfAdjointEigenSolver<Mat> es(M);
  return es.eigenvalues().maxCoeff();
}

DissipativeReport check_dissipative(const GameSpec& game, std::size_t pairs,
                                    std::uint64_t seed, double tol) {
  const auto sizes = game.block_sizes();
  std::mt19937_64 rng(seed);
  DissipativeReport rep;
  rep.worst_monotonicity = -std::numeric_limits<double>::infinity();
  double worst_normalized = -std::numeric_limits<double>::infinity();

  for (std::size_t k = 0; k < pairs; ++k) {
    const StrategyProfile x = sample_profile(sizes, rng);
    const StrategyProfile y = sample_profile(sizes, rng);
    const auto phix = evaluate(game, x);
    const auto phiy = evaluate(game, y);
    double mono = 0.0;
    double dist2 = 0.0;
    for (std::size_t i = 0; i < phix.size(); ++i) {
      const Vec dx = x[i].weights() - y[i].weights();
      mono += (phix[i] - phiy[i]).dot(dx);
      dist2 += dx.squaredNorm();
    }
    rep.worst_monotonicity = std::max(rep.worst_monotonicity, mono);
    if (dist2 > 1e-16)
      worst_normalized = std::max(worst_normalized, mono / dist2);
  }

  const std::size_t jac_points = std::min<std::size_t>(pairs, 25);
  rep.max_tangent_eigenvalue = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < jac_points; ++k) {
    const StrategyProfile x = sample_profile(sizes, rng);
    rep.max_tangent_eigenvalue =
        std::max(rep.max_tangent_eigenvalue, tangent_jacobian_max_eig(game, x));
  }

  rep.dissipative =
      rep.worst_monotonicity <= tol && rep.max_tangent_eigenvalue <= tol;
  rep.strictly = rep.dissipative && worst_normalized <= -rep.strict_margin;
  return rep;
}

PotentialReport check_potential(const GameSpec& game, std::size_t x_samples,
                                std::uint64_t seed, double tol) {
  if (!game.potential)
    throw SpecError("game '" + game.name + "' has no potential block");
  const auto sizes = game.block_sizes();
  std::mt19937_64 rng(seed);
  PotentialReport rep;
  rep.worst_defect = 0.0;
  for (std::size_t k = 0; k < x_samples; ++k) {
    const StrategyProfile x = sample_profile(sizes, rng);
    const AmbientProfile amb = x.ambient();
    const Vec gw = potential_gradient_flat(game, amb);
    const auto phi = evaluate(game, amb);
    Eigen::Index at = 0;
    for (std::size_t i = 0; i < phi.size(); ++i) {
      const double mu = game.potential->scale(amb, i);
      const Vec g = gw.segment(at, phi[i].size()) - mu * phi[i];
      rep.worst_defect =
          std::max(rep.worst_defect, g.maxCoeff() - g.minCoeff());
      at += phi[i].size();
    }
  }
  rep.pass = rep.worst_defect <= tol;
  return rep;
}

namespace {

MaximizeResult ascend_from(const GameSpec& game, StrategyProfile x,
                           std::size_t max_iters) {
  constexpr double kArmijoSlope = 1e-4;
  constexpr double kShrink = 0.5;
  constexpr double kPgTol = 1e-8;

  double w = potential_value(game, x.ambient());
  MaximizeResult res;
  for (std::size_t it = 0; it < max_iters; ++it) {
    const AmbientProfile amb = x.ambient();
    const Vec g = potential_gradient_flat(game, amb);

    AmbientProfile stepped = amb;
    Eigen::Index at = 0;
    for (auto& b : stepped) {
      b += g.segment(at, b.size());
      at += b.size();
    }
    const StrategyProfile unit = project_profile(stepped);
    res.projected_gradient_norm = distance(unit, x);
    if (res.projected_gradient_norm <= kPgTol) {
      res.converged = true;
      break;
    }

    double t = 1.0;
    bool accepted = false;
    while (t > 1e-14) {
      AmbientProfile cand = amb;
      at = 0;
      for (auto& b : cand) {
        b += t * g.segment(at, b.size());
        at += b.size();
      }
      const StrategyProfile xt = project_profile(cand);
      const double wt = potential_value(game, xt.ambient());
      double dir = 0.0;
      at = 0;
      for (std::size_t i = 0; i < amb.size(); ++i) {
        dir += g.segment(at, amb[i].size())
                   .dot(xt[i].weights() - amb[i]);
        at += amb[i].size();
      }
      if (wt >= w + kArmijoSlope * dir) {
        x = xt;
        w = wt;
        accepted = true;
        break;
      }
      t *= kShrink;
    }
    if (!accepted) break;  // no progress possible at machine precision
  }
  res.maximizer = x;
  res.value = w;
  const Vec g = potential_gradient_flat(game, x.ambient());
  res.degenerate = g.cwiseAbs().maxCoeff() <= 1e-13;
  return res;
}

}  // namespace

MaximizeResult maximize_potential(const GameSpec& game, std::size_t restarts,
                                  std::size_t max_iters, std::uint64_t seed,
                                  std::size_t jobs) {
  if (!game.potential)
    throw SpecError("game '" + game.name + "' has no potential block");
  const auto sizes = game.block_sizes();

  std::vector<StrategyProfile> starts;
  starts.push_back(game.uniform_profile());
  for (std::size_t r = 1; r < std::max<std::size_t>(restarts, 1); ++r) {
    std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * r);
    starts.push_back(sample_profile(sizes, rng));
  }

  std::vector<MaximizeResult> results(starts.size());
  if (jobs > 1) {
    std::vector<std::future<MaximizeResult>> futs;
    for (const auto& s : starts)
      futs.push_back(std::async(std::launch::async, [&game, s, max_iters] {
        return ascend_from(game, s, max_iters);
      }));
    for (std::size_t r = 0; r < futs.size(); ++r) results[r] = futs[r].get();
  } else {
    for (std::size_t r = 0; r < starts.size(); ++r)
      results[r] = ascend_from(game, starts[r], max_iters);
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r)
    if (results[r].value > results[best].value) best = r;
  return results[best];
}

}  // namespace cg
