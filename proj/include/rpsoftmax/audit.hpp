#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "rpsoftmax/core.hpp"
#include "rpsoftmax/rng.hpp"

#include "json.hpp"

namespace rpsoftmax {

// Deterministic loss prefix x_{1:t} fed to the algorithm for exact analysis.
struct AuditDataset {
  std::vector<LossVector> rows;
};

// Exact law of the block-action tuple (A_0, ..., A_s) on a fixed dataset,
// stored densely; index = ((a_0 * K + a_1) * K + ...) + a_s.
struct OutputLaw {
  int K = 0;
  int s = 0;  // final block index, block_of(t)
  std::vector<double> probs;
};

// Law of A_{r+1} given the 2^r rows of block r: uniform average over the
// prefix window of the softmax of prefix sums.
std::vector<double> exact_block_law(const std::vector<LossVector>& block_rows,
                                    int r, double eta);

OutputLaw exact_output_law(const AuditDataset& dataset, double eta,
                           const std::vector<double>& initial_law = {});

// Max over outcomes of law1(a) / law2(a); 0/0 counts as 1, positive mass over
// zero mass returns +infinity (absolute-continuity failure).
double pointwise_ratio(const OutputLaw& law1, const OutputLaw& law2);

struct AuditWitness {
  std::vector<LossVector> base_rows;
  std::size_t position = 0;  // 0-based replaced row
  LossVector replacement;
  std::size_t outcome_index = 0;
};

struct AuditReport {
  int K = 0;
  std::uint64_t t = 0;
  double eta = 0.0;
  std::vector<double> grid;
  std::uint64_t datasets_evaluated = 0;
  double max_ratio = 0.0;
  double bound = 0.0;  // e^{2 eta}
  AuditWitness witness;
  bool current_block_identity = true;  // perturbing the current block never moved the law
  bool pass = false;
};

class EnumerationBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Exhaustive (base_dataset_count == 0) or sampled neighbor audit over datasets
// with entries from the grid. Throws EnumerationBudgetExceeded when more than
// 10^7 output laws would be evaluated or the dense law storage is too large.
AuditReport audit_sweep(int K, std::uint64_t t, double eta,
                        const std::vector<double>& grid,
                        std::uint64_t base_dataset_count, Rng& rng);

// Per-prefix softmax-map check on the {0,1} grid: enumerates every reachable
// prefix-sum vector after m rows and every one-row swap, and verifies the
// pointwise softmax-law ratio against e^{2 eta}. Exact, no averaging.
struct PrefixRatioReport {
  double max_ratio = 0.0;
  double bound = 0.0;
  bool pass = false;
};

PrefixRatioReport per_prefix_ratio_check(int K, int m_max, double eta);

nlohmann::json audit_report_to_json(const AuditReport& report);

}  // namespace rpsoftmax
