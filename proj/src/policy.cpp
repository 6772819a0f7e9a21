#include "rpsoftmax/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rpsoftmax {

namespace {

std::vector<double> resolve_initial_law(int K, std::vector<double> law) {
  if (K < 2) throw std::invalid_argument("need at least 2 actions");
  if (law.empty()) return std::vector<double>(K, 1.0 / K);
  if (static_cast<int>(law.size()) != K) {
    throw std::invalid_argument("initial action law has wrong length");
  }
  double sum = 0.0;
  for (double v : law) {
    if (!(v >= 0.0)) throw std::invalid_argument("negative initial law entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("initial action law does not sum to 1");
  }
  return law;
}

}  // namespace

RpSoftmaxPolicy::RpSoftmaxPolicy(int K, double epsilon, Rng rng,
                                 std::vector<double> initial_action_law)
    : params_(eta_from_epsilon(epsilon)), K_(K), rng_(rng), prefix_sums_(K, 0.0) {
  const std::vector<double> law = resolve_initial_law(K, std::move(initial_action_law));
  action_ = sample_categorical(law, rng_);
  prefix_index_ = 1;  // M_0
}

void RpSoftmaxPolicy::check_round(std::uint64_t t) const {
  if (t != next_round_) throw std::logic_error("out-of-order round");
}

int RpSoftmaxPolicy::choose(std::uint64_t t) {
  check_round(t);
  return action_;
}

void RpSoftmaxPolicy::observe(std::uint64_t t, const LossVector& x) {
  check_round(t);
  validate_loss_vector(x, K_);
  ++position_in_block_;
  if (position_in_block_ <= prefix_index_) {
    for (int j = 0; j < K_; ++j) prefix_sums_[j] += x[j];
  }
  if (t == block_end(block_)) {
    action_ = sample_categorical(softmax_weights(prefix_sums_, params_.eta), rng_);
    ++block_;
    const PrefixWindow window = prefix_window(block_);
    prefix_index_ = window.lo + rng_.uniform_below(window.size());
    std::fill(prefix_sums_.begin(), prefix_sums_.end(), 0.0);
    position_in_block_ = 0;
  }
  ++next_round_;
}

FtlPolicy::FtlPolicy(int K) : K_(K), cumulative_(K, 0.0) {
  if (K < 2) throw std::invalid_argument("need at least 2 actions");
}

int FtlPolicy::choose(std::uint64_t t) {
  if (t != next_round_) throw std::logic_error("out-of-order round");
  int best = 0;
  for (int j = 1; j < K_; ++j) {
    if (cumulative_[j] < cumulative_[best]) best = j;
  }
  return best;
}

void FtlPolicy::observe(std::uint64_t t, const LossVector& x) {
  if (t != next_round_) throw std::logic_error("out-of-order round");
  validate_loss_vector(x, K_);
  for (int j = 0; j < K_; ++j) cumulative_[j] += x[j];
  ++next_round_;
}

HedgePolicy::HedgePolicy(int K, double eta, Rng rng)
    : K_(K), eta_(eta), rng_(rng), cumulative_(K, 0.0) {
  if (K < 2) throw std::invalid_argument("need at least 2 actions");
  if (!(eta > 0.0)) throw std::invalid_argument("hedge eta must be positive");
  action_ = sample_categorical(softmax_weights(cumulative_, eta_), rng_);
}

int HedgePolicy::choose(std::uint64_t t) {
  if (t != next_round_) throw std::logic_error("out-of-order round");
  return action_;
}

void HedgePolicy::observe(std::uint64_t t, const LossVector& x) {
  if (t != next_round_) throw std::logic_error("out-of-order round");
  validate_loss_vector(x, K_);
  for (int j = 0; j < K_; ++j) cumulative_[j] += x[j];
  action_ = sample_categorical(softmax_weights(cumulative_, eta_), rng_);
  ++next_round_;
}

DyadicLaplacePolicy::DyadicLaplacePolicy(int K, double epsilon, Rng rng)
    : K_(K), epsilon_(epsilon), rng_(rng), block_sums_(K, 0.0) {
  if (K < 2) throw std::invalid_argument("need at least 2 actions");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  action_ = static_cast<int>(rng_.uniform_below(K));
}

int DyadicLaplacePolicy::choose(std::uint64_t t) {
  if (t != next_round_) throw std::logic_error("out-of-order round");
  return action_;
}

void DyadicLaplacePolicy::observe(std::uint64_t t, const LossVector& x) {
  if (t != next_round_) throw std::logic_error("out-of-order round");
  validate_loss_vector(x, K_);
  for (int j = 0; j < K_; ++j) block_sums_[j] += x[j];
  if (t == block_end(block_)) {
    int best = 0;
    double best_score = 0.0;
    for (int j = 0; j < K_; ++j) {
      const double score = block_sums_[j] + sample_laplace(rng_, 2.0 / epsilon_);
      if (j == 0 || score < best_score) {
        best = j;
        best_score = score;
      }
    }
    action_ = best;
    ++block_;
    std::fill(block_sums_.begin(), block_sums_.end(), 0.0);
  }
  ++next_round_;
}

RegretTrace run_episode(Policy& policy, const Environment& env, std::uint64_t T,
                        Rng& rng, const std::vector<std::uint64_t>& checkpoints) {
  if (T < 1) throw std::invalid_argument("horizon must be at least 1");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) {
    throw std::invalid_argument("checkpoints must be sorted ascending");
  }
  const GapProfile profile = env.gap_profile();
  RegretTrace trace;
  std::size_t next_checkpoint = 0;
  double regret = 0.0;
  for (std::uint64_t t = 1; t <= T; ++t) {
    const int action = policy.choose(t);
    regret += profile.gaps[action];
    policy.observe(t, env.sample(rng));
    while (next_checkpoint < checkpoints.size() && checkpoints[next_checkpoint] == t) {
      trace.checkpoints.emplace_back(t, regret);
      ++next_checkpoint;
    }
  }
  if (trace.checkpoints.empty() || trace.checkpoints.back().first != T) {
    trace.checkpoints.emplace_back(T, regret);
  }
  return trace;
}

}  // namespace rpsoftmax
