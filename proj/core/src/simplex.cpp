#include "compgame/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cg {

SimplexPoint project_simplex(const Vec& v) {
  const Eigen::Index n = v.size();
  for (Eigen::Index p = 0; p < n; ++p)
    if (!std::isfinite(v[p]))
      throw DomainError("non-finite input to simplex projection");

  // points already on the simplex are fixed points, bitwise
  if (v.minCoeff() >= 0.0 && std::abs(v.sum() - 1.0) <= kSimplexEps)
    return SimplexPoint(v);

  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[j];
    const double cand = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - cand > 0.0) tau = cand;
  }
  Vec out(n);
  for (Eigen::Index p = 0; p < n; ++p) out[p] = std::max(v[p] - tau, 0.0);
  // renormalize rounding residue onto the largest coordinate
  const double s = out.sum();
  if (s != 1.0) {
    Eigen::Index imax = 0;
    out.maxCoeff(&imax);
    out[imax] += 1.0 - s;
  }
  return SimplexPoint(std::move(out));
}

Vec project_tangent_cone(const SimplexPoint& x, const Vec& v) {
  const Eigen::Index n = v.size();
  if (n != x.size()) throw DomainError("tangent projection shape mismatch");
  for (Eigen::Index p = 0; p < n; ++p)
    if (!std::isfinite(v[p]))
      throw DomainError("non-finite input to tangent-cone projection");

  std::vector<bool> active(n);
  bool any_active = false;
  for (Eigen::Index p = 0; p < n; ++p) {
    active[p] = x[p] <= kActiveEps;
    any_active = any_active || active[p];
  }

  if (!any_active) {
    // interior: plain projection onto sum z = 0
    return v.array() - v.mean();
  }

  // z_p(mu) = v_p - mu (inactive), [v_p - mu]^+ (active); the block sum is
  // continuous and strictly decreasing in mu while any inactive coordinate
  // exists, which is guaranteed since x sums to one.
  auto sum_at = [&](double mu) {
    double s = 0.0;
    for (Eigen::Index p = 0; p < n; ++p)
      s += active[p] ? std::max(v[p] - mu, 0.0) : (v[p] - mu);
    return s;
  };
  double lo = v.minCoeff() - 1.0;
  double hi = v.maxCoeff() + 1.0;
  while (sum_at(lo) < 0.0) lo -= std::max(1.0, hi - lo);
  while (sum_at(hi) > 0.0) hi += std::max(1.0, hi - lo);
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    (sum_at(mid) > 0.0 ? lo : hi) = mid;
  }
  const double mu = 0.5 * (lo + hi);
  Vec z(n);
  for (Eigen::Index p = 0; p < n; ++p)
    z[p] = active[p] ? std::max(v[p] - mu, 0.0) : (v[p] - mu);
  // absorb the bisection residue on the free coordinates
  const double resid = z.sum();
  std::size_t free_count = 0;
  for (Eigen::Index p = 0; p < n; ++p)
    if (!active[p] || z[p] > 0.0) ++free_count;
  if (free_count > 0) {
    const double corr = resid / static_cast<double>(free_count);
    for (Eigen::Index p = 0; p < n; ++p)
      if (!active[p] || z[p] > 0.0) z[p] -= corr;
  }
  return z;
}

StrategyProfile project_profile(const AmbientProfile& v) {
  std::vector<SimplexPoint> blocks;
  blocks.reserve(v.size());
  for (const auto& b : v) blocks.push_back(project_simplex(b));
  return StrategyProfile(std::move(blocks));
}

TangentVector project_tangent_profile(const StrategyProfile& x,
                                      const std::vector<Vec>& v) {
  std::vector<Vec> blocks;
  blocks.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    blocks.push_back(project_tangent_cone(x[i], v[i]));
  return TangentVector(std::move(blocks));
}

SimplexPoint sample_simplex(Eigen::Index n, std::mt19937_64& rng) {
  std::exponential_distribution<double> exp1(1.0);
  Vec v(n);
  for (Eigen::Index p = 0; p < n; ++p) v[p] = exp1(rng);
  v /= v.sum();
  return SimplexPoint(std::move(v));
}

StrategyProfile sample_profile(const std::vector<Eigen::Index>& sizes,
                               std::mt19937_64& rng) {
  std::vector<SimplexPoint> blocks;
  blocks.reserve(sizes.size());
  for (auto n : sizes) blocks.push_back(sample_simplex(n, rng));
  return StrategyProfile(std::move(blocks));
}

}  // namespace cg
