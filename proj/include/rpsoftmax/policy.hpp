#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "rpsoftmax/core.hpp"
#include "rpsoftmax/env.hpp"
#include "rpsoftmax/rng.hpp"

namespace rpsoftmax {

// Round-by-round contract: choose(t) before observing round t, then
// observe(t, x) exactly once, rounds strictly in order starting at t = 1.
// choose(t) may be repeated; it never advances state.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual int choose(std::uint64_t t) = 0;
  virtual void observe(std::uint64_t t, const LossVector& x) = 0;
};

// Randomized-prefix softmax: plays one action per dyadic block; at block end
// samples the next action from the softmax of the cumulative losses over a
// data-independent random prefix of the block.
class RpSoftmaxPolicy : public Policy {
 public:
  // initial_action_law empty means uniform over the K actions.
  RpSoftmaxPolicy(int K, double epsilon, Rng rng,
                  std::vector<double> initial_action_law = {});

  int choose(std::uint64_t t) override;
  void observe(std::uint64_t t, const LossVector& x) override;

  const PrivacyParams& params() const { return params_; }
  int current_block() const { return block_; }
  std::uint64_t prefix_index() const { return prefix_index_; }

 private:
  void check_round(std::uint64_t t) const;

  PrivacyParams params_;
  int K_;
  Rng rng_;
  int block_ = 0;
  int action_ = 0;
  std::uint64_t prefix_index_ = 1;       // M_r, sampled at block start
  std::uint64_t position_in_block_ = 0;  // observed rounds of current block
  std::vector<double> prefix_sums_;
  std::uint64_t next_round_ = 1;
};

// Follow-The-Leader over full history; ties broken by lowest index.
class FtlPolicy : public Policy {
 public:
  explicit FtlPolicy(int K);
  int choose(std::uint64_t t) override;
  void observe(std::uint64_t t, const LossVector& x) override;

 private:
  int K_;
  std::vector<double> cumulative_;
  std::uint64_t next_round_ = 1;
};

// Non-private exponential weights: fresh softmax sample every round.
class HedgePolicy : public Policy {
 public:
  HedgePolicy(int K, double eta, Rng rng);
  int choose(std::uint64_t t) override;
  void observe(std::uint64_t t, const LossVector& x) override;

 private:
  int K_;
  double eta_;
  Rng rng_;
  std::vector<double> cumulative_;
  int action_;
  std::uint64_t next_round_ = 1;
};

// Dyadic report-noisy-max baseline: full-block cumulative losses plus
// Laplace(2/epsilon) noise, argmin selects the next block's action.
class DyadicLaplacePolicy : public Policy {
 public:
  DyadicLaplacePolicy(int K, double epsilon, Rng rng);
  int choose(std::uint64_t t) override;
  void observe(std::uint64_t t, const LossVector& x) override;

 private:
  int K_;
  double epsilon_;
  Rng rng_;
  int block_ = 0;
  int action_ = 0;
  std::vector<double> block_sums_;
  std::uint64_t next_round_ = 1;
};

struct RegretTrace {
  // (t, cumulative pseudoregret at t), at the requested checkpoints.
  std::vector<std::pair<std::uint64_t, double>> checkpoints;
};

// Plays the policy against the environment for T rounds, accruing the exact
// gap of the played action each round. Checkpoints must be sorted ascending;
// T is appended implicitly if absent.
RegretTrace run_episode(Policy& policy, const Environment& env, std::uint64_t T,
                        Rng& rng, const std::vector<std::uint64_t>& checkpoints);

}  // namespace rpsoftmax
