#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rpsoftmax/env.hpp"
#include "rpsoftmax/policy.hpp"

namespace rpsoftmax {

// F_m = E[sum_j Delta_j P_{m,j}]: expected gap-weighted softmax mass on
// suboptimal actions after m i.i.d. samples.
struct FmEstimate {
  int m = 0;
  double value = 0.0;
  enum class Method { exact, monte_carlo } method = Method::exact;
  double ci_halfwidth = 0.0;  // 0 for exact
  std::uint64_t samples = 0;  // enumerated sequences or Monte Carlo draws
};

// Exact expectation by enumerating all |support|^m outcome sequences.
// Refuses when the enumeration exceeds 10^6 sequences.
FmEstimate fm_exact(const Environment& env, int m, double eta);

// Monte Carlo estimate with 99% Hoeffding confidence halfwidth over the
// range [0, max_j Delta_j].
FmEstimate fm_monte_carlo(const Environment& env, int m, double eta,
                          std::uint64_t n_samples, Rng& rng);

// Empirical check of one closed-form inequality: lhs is a Monte Carlo mean
// (99% Hoeffding CI), rhs a computed bound; pass when lhs upper CI <= rhs.
struct BoundCheck {
  double lhs = 0.0;
  double lhs_ci_halfwidth = 0.0;
  double rhs = 0.0;
  double tail_allowance = 0.0;  // part of rhs coming from the truncated tail
  int truncation_m = 0;         // last prefix length summed explicitly
  bool pass = false;
};

// Empirical instance of the clock-reduction inequality
// Reg_T <= 1 + 4 sum_m F_m, with the F_m sum truncated once the estimate
// drops below 1e-6 and the tail bounded by 2 F_M / (eta delta_min).
BoundCheck clock_bound_check(const Environment& env, double epsilon,
                             std::uint64_t T, std::uint64_t n_trials, Rng& rng);

// 200 log(K)/delta_min + 4 log(K)/eta.
double master_bound_value(int K, double delta_min, double eta);

// exp(-m mu^2 / 8).
double hoeffding_bound(std::uint64_t m, double mu);

// Grid checks of the five elementary inequalities used by the analysis.
struct InequalityReport {
  struct Item {
    std::string name;
    double worst_margin = 0.0;  // nonnegative means the inequality held
    bool pass = false;
  };
  std::vector<Item> items;
  bool pass = false;
};

// Test-only mutation hook; the default reproduces the true inequalities.
struct InequalityTweaks {
  double half_divisor = 2.0;  // divisor in items (i) and (ii)
};

InequalityReport inequality_suite(const InequalityTweaks& tweaks = {});

// Per-checkpoint mean with 99% Hoeffding (range [0, t * max_gap]) and
// empirical-stddev confidence halfwidths.
struct SummaryRow {
  std::uint64_t t = 0;
  double mean = 0.0;
  double hoeffding_halfwidth = 0.0;
  double stddev_halfwidth = 0.0;
};

std::vector<SummaryRow> regret_summary(const std::vector<RegretTrace>& traces,
                                       double max_gap);

// 99% two-sided Hoeffding halfwidth for a mean of n values with given range.
double hoeffding_ci_halfwidth(double range, std::uint64_t n);

}  // namespace rpsoftmax
