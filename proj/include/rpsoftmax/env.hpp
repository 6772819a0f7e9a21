#pragma once

#include <vector>

#include "rpsoftmax/core.hpp"
#include "rpsoftmax/rng.hpp"

namespace rpsoftmax {

enum class EnvKind { bernoulli, deterministic, finite_support, correlated };

struct Atom {
  LossVector losses;
  double prob;
};

// Stochastic i.i.d. loss-vector generator with analytically known means.
// Immutable after construction; the random stream lives with the caller.
class Environment {
 public:
  static Environment bernoulli(const std::vector<double>& means);
  static Environment correlated(const std::vector<double>& base_means, double coupling);
  static Environment deterministic(const LossVector& vector);
  static Environment finite_support(const std::vector<Atom>& atoms);

  EnvKind kind() const { return kind_; }
  int action_count() const { return K_; }
  const std::vector<double>& means() const { return means_; }

  LossVector sample(Rng& rng) const;

  // Gap profile from the exact means. Throws when the best action is tied.
  GapProfile gap_profile() const { return gap_profile_from_means(means_); }

  // Expand the round law into an explicit finite atom list (every built-in
  // kind has finite support). Throws if the expansion would exceed 2^20 atoms.
  std::vector<Atom> support_atoms() const;

 private:
  Environment() = default;

  EnvKind kind_ = EnvKind::deterministic;
  int K_ = 0;
  std::vector<double> means_;
  double coupling_ = 0.0;         // correlated only
  std::vector<Atom> atoms_;       // finite_support / deterministic
};

}  // namespace rpsoftmax
