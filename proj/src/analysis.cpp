#include "rpsoftmax/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace rpsoftmax {

namespace {

constexpr std::uint64_t kFmEnumerationBudget = 1'000'000;
constexpr double kFmTailCutoff = 1e-6;

// Compensated (Kahan) accumulator; keeps reductions order-stable in double
// precision.
struct Kahan {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double gap_weighted_softmax(const std::vector<double>& sums, double eta,
                            const GapProfile& profile) {
  const std::vector<double> p = softmax_weights(sums, eta);
  double v = 0.0;
  for (int j = 0; j < profile.K; ++j) v += profile.gaps[j] * p[j];
  return v;
}

double enumerate_fm(const std::vector<Atom>& atoms, const GapProfile& profile,
                    int depth_left, double eta, std::vector<double>& sums,
                    double prob) {
  if (depth_left == 0) return prob * gap_weighted_softmax(sums, eta, profile);
  Kahan acc;
  for (const Atom& atom : atoms) {
    for (int j = 0; j < profile.K; ++j) sums[j] += atom.losses[j];
    acc.add(enumerate_fm(atoms, profile, depth_left - 1, eta, sums, prob * atom.prob));
    for (int j = 0; j < profile.K; ++j) sums[j] -= atom.losses[j];
  }
  return acc.sum;
}

std::uint64_t pow_or_saturate(std::uint64_t base, int exp) {
  std::uint64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > (std::uint64_t{1} << 62) / std::max<std::uint64_t>(base, 1)) {
      return std::uint64_t{1} << 63;
    }
    out *= base;
  }
  return out;
}

}  // namespace

double hoeffding_ci_halfwidth(double range, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("empty sample");
  return range * std::sqrt(std::log(200.0) / (2.0 * static_cast<double>(n)));
}

FmEstimate fm_exact(const Environment& env, int m, double eta) {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  const std::vector<Atom> atoms = env.support_atoms();
  const std::uint64_t sequences = pow_or_saturate(atoms.size(), m);
  if (sequences > kFmEnumerationBudget) {
    throw std::invalid_argument("fm_exact enumeration budget exceeded: |support|^m = " +
                                std::to_string(sequences));
  }
  const GapProfile profile = env.gap_profile();
  std::vector<double> sums(profile.K, 0.0);
  FmEstimate est;
  est.m = m;
  est.method = FmEstimate::Method::exact;
  est.samples = sequences;
  est.value = enumerate_fm(atoms, profile, m, eta, sums, 1.0);
  return est;
}

FmEstimate fm_monte_carlo(const Environment& env, int m, double eta,
                          std::uint64_t n_samples, Rng& rng) {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (n_samples < 100) throw std::invalid_argument("need at least 100 samples");
  const GapProfile profile = env.gap_profile();
  Kahan acc;
  std::vector<double> sums(profile.K);
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (int s = 0; s < m; ++s) {
      const LossVector x = env.sample(rng);
      for (int j = 0; j < profile.K; ++j) sums[j] += x[j];
    }
    acc.add(gap_weighted_softmax(sums, eta, profile));
  }
  FmEstimate est;
  est.m = m;
  est.method = FmEstimate::Method::monte_carlo;
  est.samples = n_samples;
  est.value = acc.sum / static_cast<double>(n_samples);
  est.ci_halfwidth = hoeffding_ci_halfwidth(profile.max_gap(), n_samples);
  return est;
}

BoundCheck clock_bound_check(const Environment& env, double epsilon,
                             std::uint64_t T, std::uint64_t n_trials, Rng& rng) {
  if (T < 1) throw std::invalid_argument("horizon must be at least 1");
  if (n_trials < 1) throw std::invalid_argument("need at least one trial");
  const PrivacyParams params = eta_from_epsilon(epsilon);
  const GapProfile profile = env.gap_profile();
  const int K = profile.K;

  Kahan regret_acc;
  for (std::uint64_t trial = 0; trial < n_trials; ++trial) {
    Rng trial_rng = rng.split();
    RpSoftmaxPolicy policy(K, epsilon, trial_rng.split());
    const RegretTrace trace = run_episode(policy, env, T, trial_rng, {});
    regret_acc.add(trace.checkpoints.back().second);
  }

  BoundCheck check;
  check.lhs = regret_acc.sum / static_cast<double>(n_trials);
  check.lhs_ci_halfwidth =
      hoeffding_ci_halfwidth(static_cast<double>(T) * profile.max_gap(), n_trials);

  // Right-hand side: sum F_m exactly while the enumeration is small, then
  // continue the same prefixes by shared-path Monte Carlo until the estimate
  // drops below the tail cutoff.
  const std::vector<Atom> atoms = env.support_atoms();
  Kahan fm_sum;
  double last_fm = 1.0;
  int m = 0;
  constexpr int kMaxM = 100000;
  while (m < kMaxM && last_fm >= kFmTailCutoff &&
         pow_or_saturate(atoms.size(), m + 1) <= kFmEnumerationBudget) {
    ++m;
    last_fm = fm_exact(env, m, params.eta).value;
    fm_sum.add(last_fm);
  }
  if (last_fm >= kFmTailCutoff && m < kMaxM) {
    constexpr std::uint64_t kPaths = 20000;
    std::vector<std::vector<double>> path_sums(kPaths, std::vector<double>(K, 0.0));
    // Re-play the exact prefix depth on fresh sample paths, then extend.
    for (std::uint64_t p = 0; p < kPaths; ++p) {
      for (int s = 0; s < m; ++s) {
        const LossVector x = env.sample(rng);
        for (int j = 0; j < K; ++j) path_sums[p][j] += x[j];
      }
    }
    while (m < kMaxM && last_fm >= kFmTailCutoff) {
      ++m;
      Kahan acc;
      for (std::uint64_t p = 0; p < kPaths; ++p) {
        const LossVector x = env.sample(rng);
        for (int j = 0; j < K; ++j) path_sums[p][j] += x[j];
        acc.add(gap_weighted_softmax(path_sums[p], params.eta, profile));
      }
      last_fm = acc.sum / static_cast<double>(kPaths);
      fm_sum.add(last_fm);
    }
  }
  const double tail = last_fm * 2.0 / (params.eta * profile.delta_min);
  check.truncation_m = m;
  check.tail_allowance = 4.0 * tail;
  check.rhs = 1.0 + 4.0 * (fm_sum.sum + tail);
  check.pass = check.lhs + check.lhs_ci_halfwidth <= check.rhs;
  return check;
}

double master_bound_value(int K, double delta_min, double eta) {
  if (K < 2) throw std::invalid_argument("need at least 2 actions");
  if (!(delta_min > 0.0 && delta_min <= 1.0)) {
    throw std::invalid_argument("delta_min must lie in (0,1]");
  }
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  const double lk = std::log(static_cast<double>(K));
  return (200.0 * lk) / delta_min + (4.0 * lk) / eta;
}

double hoeffding_bound(std::uint64_t m, double mu) {
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (!(mu > 0.0 && mu <= 1.0)) throw std::invalid_argument("mu must lie in (0,1]");
  return std::exp(-static_cast<double>(m) * mu * mu / 8.0);
}

InequalityReport inequality_suite(const InequalityTweaks& tweaks) {
  InequalityReport report;
  const double d = tweaks.half_divisor;

  {
    // (i) 1 - e^{-x} >= x/2 on [0,1]
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 10000; ++i) {
      const double x = i / 10000.0;
      worst = std::min(worst, (1.0 - std::exp(-x)) - x / d);
    }
    report.items.push_back({"1-exp(-x) >= x/2 on [0,1]", worst, worst >= 0.0});
  }
  {
    // (ii) e^{-x} <= 1 - x/2 on [0,1]
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 10000; ++i) {
      const double x = i / 10000.0;
      worst = std::min(worst, (1.0 - x / d) - std::exp(-x));
    }
    report.items.push_back({"exp(-x) <= 1-x/2 on [0,1]", worst, worst >= 0.0});
  }
  {
    // (iii) log(1-u) <= -u on [0,1)
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 10000; ++i) {
      const double u = 0.9999 * i / 10000.0;
      worst = std::min(worst, -u - std::log1p(-u));
    }
    report.items.push_back({"log(1-u) <= -u on [0,1)", worst, worst >= 0.0});
  }
  {
    // (iv) sum_{m>n} e^{-mx} <= 2 e^{-nx} / x for x in (0,1], n in 0..50;
    // left side summed until the terms fall below 1e-15.
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= 200; ++i) {
      const double x = i / 200.0;
      const double q = std::exp(-x);
      for (int n = 0; n <= 50; ++n) {
        Kahan lhs;
        double term = std::exp(-(n + 1) * x);
        while (term > 1e-15) {
          lhs.add(term);
          term *= q;
        }
        worst = std::min(worst, 2.0 * std::exp(-n * x) / x - lhs.sum);
      }
    }
    report.items.push_back({"geometric tail sum <= 2 exp(-nx)/x", worst, worst >= 0.0});
  }
  {
    // (v) log(K+1) <= 2 log K for K in 2..10^6
    double worst = std::numeric_limits<double>::infinity();
    for (int K = 2; K <= 1000000; ++K) {
      worst = std::min(worst, 2.0 * std::log(static_cast<double>(K)) -
                                  std::log(static_cast<double>(K) + 1.0));
    }
    report.items.push_back({"log(K+1) <= 2 log K", worst, worst >= 0.0});
  }

  report.pass = true;
  for (const auto& item : report.items) report.pass = report.pass && item.pass;
  return report;
}

std::vector<SummaryRow> regret_summary(const std::vector<RegretTrace>& traces,
                                       double max_gap) {
  if (traces.empty()) throw std::invalid_argument("no traces");
  const std::size_t n_checkpoints = traces.front().checkpoints.size();
  for (const RegretTrace& trace : traces) {
    if (trace.checkpoints.size() != n_checkpoints) {
      throw std::invalid_argument("mismatched checkpoint counts");
    }
    for (std::size_t i = 0; i < n_checkpoints; ++i) {
      if (trace.checkpoints[i].first != traces.front().checkpoints[i].first) {
        throw std::invalid_argument("mismatched checkpoint rounds");
      }
    }
  }
  const std::uint64_t n = traces.size();
  std::vector<SummaryRow> rows(n_checkpoints);
  for (std::size_t i = 0; i < n_checkpoints; ++i) {
    const std::uint64_t t = traces.front().checkpoints[i].first;
    Kahan mean_acc;
    for (const RegretTrace& trace : traces) mean_acc.add(trace.checkpoints[i].second);
    const double mean = mean_acc.sum / static_cast<double>(n);
    Kahan var_acc;
    for (const RegretTrace& trace : traces) {
      const double d = trace.checkpoints[i].second - mean;
      var_acc.add(d * d);
    }
    const double stddev = n > 1 ? std::sqrt(var_acc.sum / static_cast<double>(n - 1)) : 0.0;
    rows[i].t = t;
    rows[i].mean = mean;
    rows[i].hoeffding_halfwidth =
        hoeffding_ci_halfwidth(static_cast<double>(t) * max_gap, n);
    // 99% normal-approximation interval, reported for diagnostics only.
    rows[i].stddev_halfwidth = 2.5758 * stddev / std::sqrt(static_cast<double>(n));
  }
  return rows;
}

}  // namespace rpsoftmax
