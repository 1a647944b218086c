#include "compgame/types.hpp"

#include <cmath>
#include <set>

namespace cg {

std::string to_string(Category c) {
  switch (c) {
    case Category::Population: return "population";
    case Category::AtomicSplittable: return "splittable";
    case Category::AtomicNonSplittable: return "nonsplittable";
  }
  return "?";
}

Category category_from_string(const std::string& s) {
  if (s == "population") return Category::Population;
  if (s == "splittable") return Category::AtomicSplittable;
  if (s == "nonsplittable") return Category::AtomicNonSplittable;
  throw SpecError("unknown participant category '" + s + "'");
}

void Participant::validate() const {
  if (choices.empty())
    throw SpecError("participant '" + id + "' has an empty choice set");
  std::set<std::string> seen(choices.begin(), choices.end());
  if (seen.size() != choices.size())
    throw SpecError("participant '" + id + "' has duplicate choice labels");
  if (!(weight > 0.0))
    throw SpecError("participant '" + id + "' has non-positive weight");
}

SimplexPoint::SimplexPoint(Vec w) : w_(std::move(w)) {
  if (w_.size() == 0) throw DomainError("empty simplex point");
  for (Eigen::Index p = 0; p < w_.size(); ++p) {
    if (!std::isfinite(w_[p]))
      throw DomainError("non-finite simplex component");
    if (w_[p] < -kSimplexEps)
      throw DomainError("simplex component below -eps: " +
                        std::to_string(w_[p]));
    if (w_[p] < 0.0) w_[p] = 0.0;
  }
  const double s = w_.sum();
  if (std::abs(s - 1.0) > 1e2 * kSimplexEps)
    throw DomainError("simplex components sum to " + std::to_string(s));
}

SimplexPoint SimplexPoint::uniform(Eigen::Index n) {
  return SimplexPoint(Vec::Constant(n, 1.0 / static_cast<double>(n)));
}

SimplexPoint SimplexPoint::vertex(Eigen::Index n, Eigen::Index p) {
  Vec v = Vec::Zero(n);
  v[p] = 1.0;
  return SimplexPoint(std::move(v));
}

AmbientProfile StrategyProfile::ambient() const {
  AmbientProfile out;
  out.reserve(blocks_.size());
  for (const auto& b : blocks_) out.push_back(b.weights());
  return out;
}

StrategyProfile StrategyProfile::from_ambient(const AmbientProfile& x) {
  std::vector<SimplexPoint> blocks;
  blocks.reserve(x.size());
  for (const auto& v : x) blocks.emplace_back(v);
  return StrategyProfile(std::move(blocks));
}

Vec StrategyProfile::flat() const {
  Eigen::Index n = 0;
  for (const auto& b : blocks_) n += b.size();
  Vec out(n);
  Eigen::Index at = 0;
  for (const auto& b : blocks_) {
    out.segment(at, b.size()) = b.weights();
    at += b.size();
  }
  return out;
}

TangentVector::TangentVector(std::vector<Vec> blocks)
    : blocks_(std::move(blocks)) {
  for (const auto& b : blocks_) {
    if (std::abs(b.sum()) > 1e-8)
      throw DomainError("tangent block sums to " + std::to_string(b.sum()));
  }
}

Vec TangentVector::flat() const {
  Eigen::Index n = 0;
  for (const auto& b : blocks_) n += b.size();
  Vec out(n);
  Eigen::Index at = 0;
  for (const auto& b : blocks_) {
    out.segment(at, b.size()) = b;
    at += b.size();
  }
  return out;
}

double TangentVector::inf_norm() const {
  double m = 0.0;
  for (const auto& b : blocks_) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

double TangentVector::two_norm() const {
  double s = 0.0;
  for (const auto& b : blocks_) s += b.squaredNorm();
  return std::sqrt(s);
}

double distance(const StrategyProfile& a, const StrategyProfile& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.participants(); ++i)
    s += (a[i].weights() - b[i].weights()).squaredNorm();
  return std::sqrt(s);
}

}  // namespace cg
