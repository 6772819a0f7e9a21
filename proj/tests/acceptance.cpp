// Acceptance suite: end-to-end checks of the privacy and regret guarantees,
// each printed as a single PASS/FAIL line. Exit status 0 iff every check holds.

#include <cmath>
#include <cstdio>
#include <vector>

#include "rpsoftmax/analysis.hpp"
#include "rpsoftmax/audit.hpp"
#include "rpsoftmax/experiment.hpp"
#include "rpsoftmax/policy.hpp"

using namespace rpsoftmax;

namespace {

int failures = 0;

void report(int index, const char* description, bool pass, const std::string& detail) {
  std::printf("%s criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", index,
              description, detail.c_str());
  if (!pass) ++failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// 1. Exhaustive neighbor audit of the exact output law on the {0,1} grid.
void criterion_1() {
  bool pass = true;
  double worst = 0.0, bound = 0.0;
  for (double eta : {0.05, 0.125}) {
    Rng rng(1);
    const AuditReport report = audit_sweep(2, 7, eta, {0.0, 1.0}, 0, rng);
    pass = pass && report.pass && report.current_block_identity &&
           report.max_ratio <= std::exp(2.0 * eta) * (1.0 + 1e-9);
    if (report.max_ratio / report.bound > worst / std::max(bound, 1e-300)) {
      worst = report.max_ratio;
      bound = report.bound;
    }
  }
  report(1, "exhaustive output-law audit stays within exp(2 eta)", pass,
         "worst ratio " + fmt(worst) + " vs bound " + fmt(bound));
}

// 2. Exact per-prefix softmax-map ratio check over every reachable prefix-sum
// vector and one-row swap.
void criterion_2() {
  bool pass = true;
  double worst_slack = 1e300;
  for (int K : {2, 3}) {
    for (double eta : {0.05, 0.125}) {
      const PrefixRatioReport report = per_prefix_ratio_check(K, 8, eta);
      pass = pass && report.pass;
      worst_slack = std::min(worst_slack, report.bound - report.max_ratio);
    }
  }
  report(2, "per-prefix softmax ratios bounded by exp(2 eta)", pass,
         "smallest slack " + fmt(worst_slack));
}

// 3. The closed-form output law matches one million sampled runs per dataset.
void criterion_3() {
  const std::vector<std::vector<LossVector>> datasets = {
      {{0, 1}, {1, 0}, {0, 1}, {1, 1}, {0, 0}, {1, 0}, {0, 1}},
      {{0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}},
      {{1, 0}, {1, 0}, {0, 1}, {1, 0}, {1, 0}, {1, 0}, {1, 0}},
  };
  const double epsilon = 0.25;
  const int n = 1000000;
  double worst_tv = 0.0;
  for (std::size_t d = 0; d < datasets.size(); ++d) {
    const OutputLaw law =
        exact_output_law({datasets[d]}, eta_from_epsilon(epsilon).eta);
    std::vector<double> freq(law.probs.size(), 0.0);
    for (int i = 0; i < n; ++i) {
      RpSoftmaxPolicy policy(2, epsilon,
                             Rng(derive_seed(314159, d, static_cast<std::uint64_t>(i))));
      std::size_t idx = 0;
      for (std::uint64_t t = 1; t <= 7; ++t) {
        const int a = policy.choose(t);
        if (t == block_start(block_of(t))) idx = idx * 2 + static_cast<std::size_t>(a);
        policy.observe(t, datasets[d][t - 1]);
      }
      freq[idx] += 1.0;
    }
    double tv = 0.0;
    for (std::size_t i = 0; i < freq.size(); ++i) {
      tv += std::abs(freq[i] / n - law.probs[i]);
    }
    worst_tv = std::max(worst_tv, tv / 2.0);
  }
  report(3, "exact output law matches 10^6 sampled runs per dataset",
         worst_tv <= 0.005, "worst TV distance " + fmt(worst_tv) + " <= 0.005");
}

// 4. Regret stays under the closed-form bound on an eight-action instance.
Environment eight_action_env() {
  return Environment::bernoulli({0.3, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5});
}

void criterion_4() {
  const Environment env = eight_action_env();
  const GapProfile profile = env.gap_profile();
  const double epsilon = 0.5;
  const std::uint64_t T = 1 << 14;
  const std::uint64_t trials = 200;
  std::vector<RegretTrace> traces(trials);
  for (std::uint64_t i = 0; i < trials; ++i) {
    const std::uint64_t seed = derive_seed(4242, 0, i);
    Rng policy_rng(splitmix64(seed ^ 0xa5a5a5a5a5a5a5a5ULL));
    Rng env_rng(splitmix64(seed ^ 0x5a5a5a5a5a5a5a5aULL));
    RpSoftmaxPolicy policy(profile.K, epsilon, policy_rng);
    traces[i] = run_episode(policy, env, T, env_rng, {T});
  }
  const SummaryRow row = regret_summary(traces, profile.max_gap()).front();
  const TheoremBound bound = theorem_bound(profile.K, profile.delta_min, epsilon);
  const double upper = row.mean + row.hoeffding_halfwidth;
  report(4, "K=8 Bernoulli regret under the closed-form bound",
         upper <= bound.tight,
         "99% upper CI " + fmt(upper) + " <= " + fmt(bound.tight));
}

// 5. Regret is horizon-free: on the same instance as criterion 4 it barely
// grows from T=2^12 to T=2^16 over matched-seed trials.
bool horizon_free_trial(std::uint64_t trials, std::string& detail) {
  const Environment env = eight_action_env();
  const int K = env.gap_profile().K;
  const std::uint64_t t_lo = 1 << 12, t_hi = 1 << 16;
  double sum_lo = 0.0, sum_diff = 0.0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const std::uint64_t seed = derive_seed(5150, 0, i);
    Rng policy_rng(splitmix64(seed ^ 0xa5a5a5a5a5a5a5a5ULL));
    Rng env_rng(splitmix64(seed ^ 0x5a5a5a5a5a5a5a5aULL));
    RpSoftmaxPolicy policy(K, 0.5, policy_rng);
    const RegretTrace trace = run_episode(policy, env, t_hi, env_rng, {t_lo, t_hi});
    sum_lo += trace.checkpoints[0].second;
    sum_diff += trace.checkpoints[1].second - trace.checkpoints[0].second;
  }
  const double mean_lo = sum_lo / trials;
  const double mean_diff = sum_diff / trials;
  const double allowance = 0.25 * mean_lo + 1.0;
  detail = "growth " + fmt(mean_diff) + " <= " + fmt(allowance) + " at " +
           std::to_string(trials) + " trials";
  return mean_diff <= allowance;
}

void criterion_5() {
  std::string detail;
  bool pass = horizon_free_trial(200, detail);
  if (!pass) pass = horizon_free_trial(1000, detail);  // statistical escalation
  report(5, "regret growth from 2^12 to 2^16 rounds is negligible", pass, detail);
}

// 6. Empirical regret on the deterministic instance obeys the clock
// reduction with exact closed-form terms on the right-hand side.
void criterion_6() {
  const Environment env = Environment::deterministic({0.0, 1.0});
  const double eta = eta_from_epsilon(1.0).eta;  // 0.125
  const std::uint64_t T = 64, trials = 10000;
  std::vector<RegretTrace> traces(trials);
  for (std::uint64_t i = 0; i < trials; ++i) {
    const std::uint64_t seed = derive_seed(6006, 0, i);
    Rng policy_rng(splitmix64(seed ^ 0xa5a5a5a5a5a5a5a5ULL));
    Rng env_rng(splitmix64(seed ^ 0x5a5a5a5a5a5a5a5aULL));
    RpSoftmaxPolicy policy(2, 1.0, policy_rng);
    traces[i] = run_episode(policy, env, T, env_rng, {T});
  }
  const SummaryRow row = regret_summary(traces, 1.0).front();
  double rhs = 1.0;
  for (int m = 1; m <= 200; ++m) {
    rhs += 4.0 * std::exp(-eta * m) / (1.0 + std::exp(-eta * m));
  }
  const double upper = row.mean + row.hoeffding_halfwidth;
  report(6, "deterministic-instance regret obeys the clock reduction",
         upper <= rhs, "99% upper CI " + fmt(upper) + " <= " + fmt(rhs));
}

// 7. Exact and Monte Carlo estimates of the per-prefix error mass agree.
void criterion_7() {
  const Environment env = Environment::bernoulli({0.2, 0.8});
  const double eta = 0.125;
  Rng rng(77);
  bool pass = true;
  double worst = 0.0;
  for (int m = 1; m <= 8; ++m) {
    const FmEstimate exact = fm_exact(env, m, eta);
    const FmEstimate mc = fm_monte_carlo(env, m, eta, 1000000, rng);
    const double gap = std::abs(exact.value - mc.value);
    pass = pass && gap <= mc.ci_halfwidth;
    worst = std::max(worst, gap / mc.ci_halfwidth);
  }
  report(7, "exact error-mass terms match 10^6-sample Monte Carlo", pass,
         "worst |gap|/halfwidth " + fmt(worst) + " <= 1");
}

// 8. The regret bound equals 1 + 4x the summed error-mass bound, bit for bit.
void criterion_8() {
  bool pass = true;
  int checked = 0;
  for (int K : {2, 3, 4, 8, 16, 64, 256, 1000, 4096, 100000}) {
    for (double delta : {0.01, 0.1, 0.25, 0.5, 1.0}) {
      for (double eps : {0.05, 1.0}) {
        const TheoremBound bound = theorem_bound(K, delta, eps);
        pass = pass && (1.0 + 4.0 * master_bound_value(K, delta, bound.eta) == bound.tight);
        ++checked;
      }
    }
  }
  report(8, "regret bound equals 1 + 4x the summed bound bit-for-bit", pass,
         fmt(checked) + " grid points");
}

// 9. The elementary inequalities hold on dense grids and the concentration
// bound holds empirically.
void criterion_9() {
  const InequalityReport inequalities = inequality_suite();
  const int m = 50;
  const double mu = 0.6;
  const Environment env = Environment::bernoulli({0.2, 0.8});
  Rng rng(99);
  const std::uint64_t n = 1000000;
  std::uint64_t below = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int s = 0; s < m; ++s) {
      const LossVector x = env.sample(rng);
      sum += x[1] - x[0];
    }
    if (sum <= m * mu / 2.0) ++below;
  }
  const double p_hat = static_cast<double>(below) / n;
  const double bound = hoeffding_bound(m, mu);
  const double sigma = std::sqrt(bound * (1.0 - bound) / n);
  const bool pass = inequalities.pass && p_hat <= bound + 3.0 * sigma;
  report(9, "inequality grid checks and empirical concentration bound", pass,
         "empirical " + fmt(p_hat) + " <= " + fmt(bound + 3.0 * sigma));
}

// 10. Simulation output is byte-identical for any thread count.
void criterion_10() {
  const nlohmann::json j = {
      {"environment", {{"kind", "bernoulli"}, {"means", {0.2, 0.8}}}},
      {"epsilon", {0.25, 1.0}},
      {"horizon", 1024},
      {"trials", 20},
      {"algorithms",
       {"rp_softmax", "ftl", nlohmann::json{{"name", "hedge"}, {"eta", 0.1}},
        "laplace_rnm"}},
      {"master_seed", 10101},
  };
  const ExperimentConfig config = parse_config(j);
  const SimulateResult one = run_simulate(config, 1);
  const SimulateResult four = run_simulate(config, 4);
  const SimulateResult eight = run_simulate(config, 8);
  const bool pass = one.csv == four.csv && one.csv == eight.csv &&
                    one.summary == four.summary && one.summary == eight.summary;
  report(10, "simulation output byte-identical across 1/4/8 threads", pass,
         fmt(static_cast<double>(one.csv.size())) + " csv bytes");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (failures == 0) {
    std::printf("all 10 acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria failed\n", failures);
  return 1;
}
