#ifndef COMPGAME_TYPES_HPP
#define COMPGAME_TYPES_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace cg {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// A point per participant, not necessarily on the simplex. Evaluation
// functions and finite differences operate on this ambient representation.
using AmbientProfile = std::vector<Vec>;

inline constexpr double kSimplexEps = 1e-9;   // feasibility tolerance
inline constexpr double kActiveEps = 1e-9;    // face-activity threshold
inline constexpr double kViTol = 1e-8;        // default equilibrium tolerance

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class SpecError : public Error {
 public:
  explicit SpecError(const std::string& msg) : Error(msg) {}
};

class EvalError : public Error {
 public:
  explicit EvalError(const std::string& msg) : Error(msg) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& msg) : Error(msg) {}
};

enum class Category { Population, AtomicSplittable, AtomicNonSplittable };

std::string to_string(Category c);
Category category_from_string(const std::string& s);

struct Participant {
  std::string id;
  Category category = Category::Population;
  std::vector<std::string> choices;
  double weight = 1.0;

  void validate() const;
};

// A mixed strategy / population share vector: nonnegative, sums to one.
class SimplexPoint {
 public:
  SimplexPoint() = default;
  explicit SimplexPoint(Vec w);

  const Vec& weights() const { return w_; }
  double operator[](Eigen::Index p) const { return w_[p]; }
  Eigen::Index size() const { return w_.size(); }

  static SimplexPoint uniform(Eigen::Index n);
  static SimplexPoint vertex(Eigen::Index n, Eigen::Index p);

 private:
  Vec w_;
};

class StrategyProfile {
 public:
  StrategyProfile() = default;
  explicit StrategyProfile(std::vector<SimplexPoint> blocks)
      : blocks_(std::move(blocks)) {}

  const std::vector<SimplexPoint>& blocks() const { return blocks_; }
  const SimplexPoint& operator[](std::size_t i) const { return blocks_[i]; }
  std::size_t participants() const { return blocks_.size(); }

  AmbientProfile ambient() const;
  static StrategyProfile from_ambient(const AmbientProfile& x);

  Vec flat() const;

 private:
  std::vector<SimplexPoint> blocks_;
};

// Per-participant velocity; each block lies in the tangent space
// {z : sum z_p = 0}.
class TangentVector {
 public:
  TangentVector() = default;
  explicit TangentVector(std::vector<Vec> blocks);

  const std::vector<Vec>& blocks() const { return blocks_; }
  const Vec& operator[](std::size_t i) const { return blocks_[i]; }
  std::size_t participants() const { return blocks_.size(); }

  Vec flat() const;
  double inf_norm() const;
  double two_norm() const;

 private:
  std::vector<Vec> blocks_;
};

double distance(const StrategyProfile& a, const StrategyProfile& b);

}  // namespace cg

#endif
