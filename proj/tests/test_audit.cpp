#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "rpsoftmax/audit.hpp"
#include "rpsoftmax/policy.hpp"

using namespace rpsoftmax;

TEST_CASE("exact_block_law") {
  SUBCASE("single row block") {
    const auto law = exact_block_law({{0.0, 1.0}}, 0, 0.125);
    const double z = 1.0 + std::exp(-0.125);
    CHECK(law[0] == doctest::Approx(1.0 / z).epsilon(1e-12));
    CHECK(law[1] == doctest::Approx(std::exp(-0.125) / z).epsilon(1e-12));
    CHECK(law[0] == doctest::Approx(0.53121).epsilon(1e-4));
  }
  SUBCASE("constant rows give the uniform law") {
    const std::vector<LossVector> rows(4, LossVector{0.6, 0.6, 0.6});
    const auto law = exact_block_law(rows, 2, 0.125);
    for (double v : law) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  }
  SUBCASE("averaged law matches the sampling policy") {
    // Block B_2: the policy averages softmax over prefixes m in {3, 4}.
    const std::vector<LossVector> rows = {
        {0.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}, {0.0, 0.5}};
    const auto law = exact_block_law(rows, 2, 0.125);
    CHECK(law[0] + law[1] == doctest::Approx(1.0).epsilon(1e-12));
    int counts[2] = {0, 0};
    const int n = 1000000;
    for (int seed = 0; seed < n; ++seed) {
      RpSoftmaxPolicy policy(2, 0.25, Rng(seed));
      for (std::uint64_t t = 1; t <= 7; ++t) {
        policy.choose(t);
        // rounds 4..7 get the block B_2 rows; earlier rounds get filler,
        // which cannot affect A_3 (selection only reads the current block)
        policy.observe(t, rows[t >= 4 ? t - 4 : 0]);
      }
      ++counts[policy.choose(8)];
    }
    CHECK(std::abs(static_cast<double>(counts[0]) / n - law[0]) < 0.005);
  }
  CHECK_THROWS_AS(exact_block_law({{0.0, 1.0}}, 1, 0.125), std::invalid_argument);
}

TEST_CASE("exact_output_law") {
  SUBCASE("t=1 is the initial law") {
    AuditDataset d{{{0.3, 0.9}}};
    const OutputLaw law = exact_output_law(d, 0.125, {0.7, 0.3});
    CHECK(law.s == 0);
    CHECK(law.probs == std::vector<double>{0.7, 0.3});
  }
  SUBCASE("t=3 factorizes over B_0 only") {
    AuditDataset d{{{0.0, 1.0}, {1.0, 1.0}, {0.0, 0.0}}};
    const OutputLaw law = exact_output_law(d, 0.125);
    CHECK(law.s == 1);
    REQUIRE(law.probs.size() == 4);
    const auto b0 = exact_block_law({{0.0, 1.0}}, 0, 0.125);
    CHECK(law.probs[0] == doctest::Approx(0.5 * b0[0]).epsilon(1e-12));
    CHECK(law.probs[1] == doctest::Approx(0.5 * b0[1]).epsilon(1e-12));
    CHECK(law.probs[2] == doctest::Approx(0.5 * b0[0]).epsilon(1e-12));
    CHECK(law.probs[3] == doctest::Approx(0.5 * b0[1]).epsilon(1e-12));
  }
  SUBCASE("all-zero dataset is uniform over tuples") {
    AuditDataset d{std::vector<LossVector>(7, LossVector{0.0, 0.0})};
    const OutputLaw law = exact_output_law(d, 0.125);
    CHECK(law.s == 2);
    REQUIRE(law.probs.size() == 8);
    for (double v : law.probs) CHECK(v == doctest::Approx(0.125).epsilon(1e-12));
  }
  SUBCASE("normalization") {
    Rng rng(1);
    for (int it = 0; it < 20; ++it) {
      std::vector<LossVector> rows;
      for (int t = 0; t < 15; ++t) {
        rows.push_back({rng.next_double(), rng.next_double(), rng.next_double()});
      }
      const OutputLaw law = exact_output_law({rows}, 0.1);
      double total = 0.0;
      for (double v : law.probs) total += v;
      CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("pointwise_ratio") {
  OutputLaw a{2, 0, {0.6, 0.4}};
  OutputLaw b{2, 0, {0.5, 0.5}};
  CHECK(pointwise_ratio(a, a) == doctest::Approx(1.0));
  CHECK(pointwise_ratio(a, b) == doctest::Approx(1.2));
  CHECK(pointwise_ratio(b, a) == doctest::Approx(1.25));
  OutputLaw c{2, 0, {1.0, 0.0}};
  OutputLaw dz{2, 0, {0.0, 1.0}};
  CHECK(std::isinf(pointwise_ratio(c, dz)));
  CHECK(pointwise_ratio(c, c) == doctest::Approx(1.0));  // 0/0 counts as 1
}

TEST_CASE("output law matches sampled frequencies on fixed datasets") {
  // Oracle agreement at unit-test scale; the acceptance suite does 10^6 runs.
  const std::vector<LossVector> rows = {
      {0.0, 1.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}, {0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  const double epsilon = 0.25;
  const OutputLaw law = exact_output_law({rows}, eta_from_epsilon(epsilon).eta);
  std::vector<double> freq(law.probs.size(), 0.0);
  const int n = 200000;
  for (int seed = 0; seed < n; ++seed) {
    RpSoftmaxPolicy policy(2, epsilon, Rng(seed));
    std::size_t idx = 0;
    for (std::uint64_t t = 1; t <= 7; ++t) {
      const int a = policy.choose(t);
      if (t == block_start(block_of(t))) idx = idx * 2 + static_cast<std::size_t>(a);
      policy.observe(t, rows[t - 1]);
    }
    freq[idx] += 1.0;
  }
  double tv = 0.0;
  for (std::size_t i = 0; i < freq.size(); ++i) tv += std::abs(freq[i] / n - law.probs[i]);
  CHECK(tv / 2.0 < 0.01);
}

TEST_CASE("audit_sweep") {
  Rng rng(7);
  SUBCASE("t=1 is a trivial pass") {
    const AuditReport report = audit_sweep(2, 1, 0.125, {0.0, 1.0}, 0, rng);
    CHECK(report.pass);
    CHECK(report.max_ratio == doctest::Approx(1.0));
  }
  SUBCASE("exhaustive small instance") {
    const AuditReport report = audit_sweep(2, 3, 0.125, {0.0, 1.0}, 0, rng);
    CHECK(report.pass);
    CHECK(report.current_block_identity);
    CHECK(report.max_ratio <= std::exp(0.25) * (1.0 + 1e-9));
    CHECK(report.max_ratio > 1.0);  // some neighbor actually moves the law
    CHECK(report.datasets_evaluated == 64);  // 2^(2*3)
  }
  SUBCASE("sampled datasets") {
    const AuditReport report = audit_sweep(3, 7, 0.05, {0.0, 0.5, 1.0}, 25, rng);
    CHECK(report.pass);
    CHECK(report.datasets_evaluated == 25);
    CHECK(report.max_ratio <= std::exp(0.1) * (1.0 + 1e-9));
  }
  SUBCASE("budget refusal") {
    CHECK_THROWS_AS(audit_sweep(2, 31, 0.125, {0.0, 1.0}, 0, rng),
                    EnumerationBudgetExceeded);
    CHECK_THROWS_AS(audit_sweep(5, 127, 0.125, {0.0, 1.0}, 10, rng),
                    EnumerationBudgetExceeded);
  }
  SUBCASE("json serialization") {
    const AuditReport report = audit_sweep(2, 3, 0.125, {0.0, 1.0}, 0, rng);
    const nlohmann::json j = audit_report_to_json(report);
    CHECK(j.at("pass").get<bool>());
    CHECK(j.at("bound").get<double>() == doctest::Approx(std::exp(0.25)));
    CHECK(j.contains("witness"));
  }
}

TEST_CASE("per-prefix softmax ratio stays within exp(2 eta)") {
  for (double eta : {0.05, 0.125}) {
    const PrefixRatioReport report = per_prefix_ratio_check(3, 6, eta);
    CHECK(report.pass);
    CHECK(report.max_ratio <= std::exp(2.0 * eta));
    CHECK(report.max_ratio > std::exp(eta));  // the bound is nearly attained
  }
}

TEST_CASE("auditing with smaller eta keeps the verdict consistent") {
  Rng rng(9);
  const AuditReport strict = audit_sweep(2, 3, 0.05, {0.0, 1.0}, 0, rng);
  const AuditReport loose = audit_sweep(2, 3, 0.125, {0.0, 1.0}, 0, rng);
  CHECK(strict.pass);
  CHECK(loose.pass);
  CHECK(strict.bound < loose.bound);
  CHECK(strict.max_ratio <= strict.bound * (1.0 + 1e-9));
}
