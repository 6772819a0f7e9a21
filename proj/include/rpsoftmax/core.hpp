#pragma once

#include <cstdint>
#include <vector>

#include "rpsoftmax/rng.hpp"

namespace rpsoftmax {

// A loss vector is one round's losses, entries in [0, 1].
using LossVector = std::vector<double>;

// Privacy budget and the softmax inverse temperature derived from it.
struct PrivacyParams {
  double epsilon;
  double eta;  // min(epsilon / 2, 1 / 8)
};

PrivacyParams eta_from_epsilon(double epsilon);

// Gap structure of an environment with a unique best (lowest-mean) action.
// Action indices are never permuted; best_action records the minimizer.
struct GapProfile {
  int K = 0;
  std::vector<double> means;
  std::vector<double> gaps;  // gaps[j] = means[j] - means[best_action]
  int best_action = -1;
  double delta_min = 0.0;  // smallest nonzero gap

  double max_gap() const;
};

GapProfile gap_profile_from_means(const std::vector<double>& means);

// Dyadic block arithmetic. Block r covers rounds {2^r, ..., 2^{r+1}-1}.
// Rounds are 1-based, blocks 0-based.
int block_of(std::uint64_t t);
std::uint64_t block_start(int r);
std::uint64_t block_end(int r);  // inclusive
std::uint64_t block_length(int r);

// Inclusive range of admissible prefix lengths for block r:
// {1} for r = 0, {2^{r-1}+1, ..., 2^r} for r >= 1.
struct PrefixWindow {
  std::uint64_t lo;
  std::uint64_t hi;  // inclusive
  std::uint64_t size() const { return hi - lo + 1; }
};

PrefixWindow prefix_window(int r);

// p_j proportional to exp(-eta * losses_j), stabilized by shifting scores by
// their maximum before exponentiation.
std::vector<double> softmax_weights(const std::vector<double>& losses, double eta);

// Inverse-CDF draw from a probability vector; the last index absorbs any
// floating-point residual mass.
int sample_categorical(const std::vector<double>& p, Rng& rng);

// Regret bounds for the randomized-prefix softmax algorithm:
//   tight   = 1 + 800 log(K)/delta_min + 16 log(K)/eta
//   relaxed = 1000 (log(K)/delta_min + log(K)/epsilon)
// Natural logarithm throughout.
struct TheoremBound {
  double eta;
  double tight;
  double relaxed;
};

TheoremBound theorem_bound(int K, double delta_min, double epsilon);

void validate_loss_vector(const LossVector& x, int K);

}  // namespace rpsoftmax
