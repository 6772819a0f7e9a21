#include "rpsoftmax/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rpsoftmax {

namespace {

constexpr std::uint64_t kMaxRound = std::uint64_t{1} << 62;

}  // namespace

PrivacyParams eta_from_epsilon(double epsilon) {
  if (!std::isfinite(epsilon) || epsilon <= 0.0) {
    throw std::invalid_argument("epsilon must be positive and finite");
  }
  return {epsilon, std::min(epsilon / 2.0, 0.125)};
}

double GapProfile::max_gap() const {
  return *std::max_element(gaps.begin(), gaps.end());
}

GapProfile gap_profile_from_means(const std::vector<double>& means) {
  const int K = static_cast<int>(means.size());
  if (K < 2) throw std::invalid_argument("need at least 2 actions");
  for (double m : means) {
    if (!std::isfinite(m) || m < 0.0 || m > 1.0) {
      throw std::invalid_argument("means must lie in [0,1]");
    }
  }
  int best = 0;
  for (int j = 1; j < K; ++j) {
    if (means[j] < means[best]) best = j;
  }
  for (int j = 0; j < K; ++j) {
    if (j != best && means[j] == means[best]) {
      throw std::invalid_argument("no unique best action: tied minimum mean");
    }
  }
  GapProfile profile;
  profile.K = K;
  profile.means = means;
  profile.best_action = best;
  profile.gaps.resize(K);
  profile.delta_min = std::numeric_limits<double>::infinity();
  for (int j = 0; j < K; ++j) {
    profile.gaps[j] = means[j] - means[best];
    if (j != best) profile.delta_min = std::min(profile.delta_min, profile.gaps[j]);
  }
  return profile;
}

int block_of(std::uint64_t t) {
  if (t < 1 || t > kMaxRound) throw std::invalid_argument("round index out of range");
  return std::bit_width(t) - 1;
}

std::uint64_t block_start(int r) {
  if (r < 0 || r > 61) throw std::invalid_argument("block index out of range");
  return std::uint64_t{1} << r;
}

std::uint64_t block_end(int r) { return (block_start(r) << 1) - 1; }

std::uint64_t block_length(int r) { return block_start(r); }

PrefixWindow prefix_window(int r) {
  if (r < 0 || r > 61) throw std::invalid_argument("block index out of range");
  if (r == 0) return {1, 1};
  const std::uint64_t half = std::uint64_t{1} << (r - 1);
  return {half + 1, half << 1};
}

std::vector<double> softmax_weights(const std::vector<double>& losses, double eta) {
  if (losses.empty()) throw std::invalid_argument("empty loss vector");
  if (!std::isfinite(eta) || eta <= 0.0) {
    throw std::invalid_argument("eta must be positive and finite");
  }
  for (double v : losses) {
    if (std::isnan(v)) throw std::invalid_argument("NaN loss entry");
  }
  const std::size_t K = losses.size();
  std::vector<double> scores(K);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < K; ++j) {
    scores[j] = -eta * losses[j];
    top = std::max(top, scores[j]);
  }
  std::vector<double> p(K);
  double sum = 0.0;
  for (std::size_t j = 0; j < K; ++j) {
    p[j] = std::exp(scores[j] - top);
    sum += p[j];
  }
  for (double& v : p) v /= sum;
  return p;
}

int sample_categorical(const std::vector<double>& p, Rng& rng) {
  if (p.empty()) throw std::invalid_argument("empty probability vector");
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) throw std::invalid_argument("negative probability entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("probabilities do not sum to 1");
  }
  const double u = rng.next_double();
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 < p.size(); ++j) {
    acc += p[j];
    if (u < acc) return static_cast<int>(j);
  }
  return static_cast<int>(p.size()) - 1;
}

TheoremBound theorem_bound(int K, double delta_min, double epsilon) {
  if (K < 2) throw std::invalid_argument("need at least 2 actions");
  if (!std::isfinite(delta_min) || delta_min <= 0.0 || delta_min > 1.0) {
    throw std::invalid_argument("delta_min must lie in (0,1]");
  }
  const PrivacyParams params = eta_from_epsilon(epsilon);
  const double lk = std::log(static_cast<double>(K));
  // Structured as 1 + 4 * (200 lk / delta + 4 lk / eta) so that the value
  // agrees bit-for-bit with master_bound_value in the analysis module
  // module (the factor 4 is an exact binary scaling).
  const double tight = 1.0 + 4.0 * ((200.0 * lk) / delta_min + (4.0 * lk) / params.eta);
  const double relaxed = 1000.0 * (lk / delta_min + lk / epsilon);
  return {params.eta, tight, relaxed};
}

void validate_loss_vector(const LossVector& x, int K) {
  if (static_cast<int>(x.size()) != K) {
    throw std::invalid_argument("loss vector has wrong length");
  }
  for (double v : x) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw std::invalid_argument("loss entry outside [0,1]");
    }
  }
}

}  // namespace rpsoftmax
