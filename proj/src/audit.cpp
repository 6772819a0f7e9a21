#include "rpsoftmax/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rpsoftmax {

namespace {

constexpr std::uint64_t kLawBudget = 10'000'000;
constexpr std::uint64_t kDenseLawLimit = 1 << 15;

std::vector<double> uniform_law(int K) { return std::vector<double>(K, 1.0 / K); }

// checked pow with saturation at 2^63
std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (out > (std::uint64_t{1} << 62) / std::max<std::uint64_t>(base, 1)) {
      return std::uint64_t{1} << 63;
    }
    out *= base;
  }
  return out;
}

// Advance a mixed-radix counter; returns false once it wraps to all zeros.
bool next_odometer(std::vector<std::size_t>& digits, std::size_t radix) {
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (++digits[i] < radix) return true;
    digits[i] = 0;
  }
  return false;
}

double directed_ratio(const std::vector<double>& a, const std::vector<double>& b,
                      std::size_t* arg_max) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double ratio;
    if (b[i] > 0.0) {
      ratio = a[i] / b[i];
    } else if (a[i] == 0.0) {
      ratio = 1.0;
    } else {
      ratio = std::numeric_limits<double>::infinity();
    }
    if (ratio > worst) {
      worst = ratio;
      if (arg_max) *arg_max = i;
    }
  }
  return worst;
}

}  // namespace

std::vector<double> exact_block_law(const std::vector<LossVector>& block_rows,
                                    int r, double eta) {
  if (block_rows.size() != block_length(r)) {
    throw std::invalid_argument("block row count does not match block length");
  }
  const int K = static_cast<int>(block_rows.front().size());
  const PrefixWindow window = prefix_window(r);
  std::vector<double> sums(K, 0.0);
  std::vector<double> law(K, 0.0);
  const double weight = 1.0 / static_cast<double>(window.size());
  for (std::uint64_t m = 1; m <= window.hi; ++m) {
    const LossVector& row = block_rows[m - 1];
    validate_loss_vector(row, K);
    for (int j = 0; j < K; ++j) sums[j] += row[j];
    if (m >= window.lo) {
      const std::vector<double> p = softmax_weights(sums, eta);
      for (int j = 0; j < K; ++j) law[j] += weight * p[j];
    }
  }
  return law;
}

OutputLaw exact_output_law(const AuditDataset& dataset, double eta,
                           const std::vector<double>& initial_law) {
  const std::uint64_t t = dataset.rows.size();
  if (t < 1) throw std::invalid_argument("dataset must contain at least one row");
  const int K = static_cast<int>(dataset.rows.front().size());
  const int s = block_of(t);
  if (checked_pow(K, s + 1) > kDenseLawLimit) {
    throw EnumerationBudgetExceeded("dense output law too large: K^{s+1} > 2^15");
  }
  OutputLaw law;
  law.K = K;
  law.s = s;
  law.probs = initial_law.empty() ? uniform_law(K) : initial_law;
  if (static_cast<int>(law.probs.size()) != K) {
    throw std::invalid_argument("initial law has wrong length");
  }
  // Only complete previous blocks contribute selection factors; the data in
  // the current block B_s has not been used for any selection yet.
  for (int r = 0; r < s; ++r) {
    const auto first = dataset.rows.begin() + static_cast<std::ptrdiff_t>(block_start(r) - 1);
    const std::vector<LossVector> block_rows(first, first + static_cast<std::ptrdiff_t>(block_length(r)));
    const std::vector<double> factor = exact_block_law(block_rows, r, eta);
    std::vector<double> next(law.probs.size() * K);
    for (std::size_t i = 0; i < law.probs.size(); ++i) {
      for (int a = 0; a < K; ++a) next[i * K + a] = law.probs[i] * factor[a];
    }
    law.probs = std::move(next);
  }
  return law;
}

double pointwise_ratio(const OutputLaw& law1, const OutputLaw& law2) {
  if (law1.K != law2.K || law1.s != law2.s || law1.probs.size() != law2.probs.size()) {
    throw std::invalid_argument("output laws over different outcome spaces");
  }
  return directed_ratio(law1.probs, law2.probs, nullptr);
}

AuditReport audit_sweep(int K, std::uint64_t t, double eta,
                        const std::vector<double>& grid,
                        std::uint64_t base_dataset_count, Rng& rng) {
  if (K < 2) throw std::invalid_argument("need at least 2 actions");
  if (t < 1) throw std::invalid_argument("horizon must be at least 1");
  if (grid.empty()) throw std::invalid_argument("empty loss grid");
  for (double v : grid) {
    if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
      throw std::invalid_argument("grid values must lie in [0,1]");
    }
  }
  const int s = block_of(t);
  if (checked_pow(K, s + 1) > kDenseLawLimit) {
    throw EnumerationBudgetExceeded("dense output law too large: K^{s+1} > 2^15");
  }
  const std::uint64_t g = grid.size();
  const std::uint64_t rows_per_position = checked_pow(g, K);
  const bool exhaustive = base_dataset_count == 0;
  const std::uint64_t n_base = exhaustive ? checked_pow(g, K * t) : base_dataset_count;
  const std::uint64_t laws_per_base = 1 + t * rows_per_position;
  if (rows_per_position > kLawBudget || n_base > kLawBudget / laws_per_base) {
    throw EnumerationBudgetExceeded(
        "audit enumeration budget exceeded: " + std::to_string(n_base) +
        " base datasets x " + std::to_string(laws_per_base) +
        " laws each > 10^7");
  }

  // Pre-expand all replacement rows.
  std::vector<LossVector> replacement_rows;
  {
    std::vector<std::size_t> digits(K, 0);
    do {
      LossVector row(K);
      for (int j = 0; j < K; ++j) row[j] = grid[digits[j]];
      replacement_rows.push_back(std::move(row));
    } while (next_odometer(digits, g));
  }

  AuditReport report;
  report.K = K;
  report.t = t;
  report.eta = eta;
  report.grid = grid;
  report.bound = std::exp(2.0 * eta);
  report.max_ratio = 0.0;

  std::vector<std::size_t> base_digits(K * t, 0);
  AuditDataset base;
  base.rows.assign(t, LossVector(K, 0.0));
  for (std::uint64_t i = 0; i < n_base; ++i) {
    if (exhaustive) {
      for (std::uint64_t u = 0; u < t; ++u) {
        for (int j = 0; j < K; ++j) base.rows[u][j] = grid[base_digits[u * K + j]];
      }
    } else {
      for (std::uint64_t u = 0; u < t; ++u) {
        for (int j = 0; j < K; ++j) base.rows[u][j] = grid[rng.uniform_below(g)];
      }
    }
    const OutputLaw base_law = exact_output_law(base, eta);
    AuditDataset neighbor = base;
    for (std::uint64_t u = 0; u < t; ++u) {
      const bool in_current_block = block_of(u + 1) == s;
      for (const LossVector& row : replacement_rows) {
        neighbor.rows[u] = row;
        const OutputLaw neighbor_law = exact_output_law(neighbor, eta);
        std::size_t arg1 = 0, arg2 = 0;
        const double r1 = directed_ratio(base_law.probs, neighbor_law.probs, &arg1);
        const double r2 = directed_ratio(neighbor_law.probs, base_law.probs, &arg2);
        const double ratio = std::max(r1, r2);
        if (in_current_block && ratio != 1.0) report.current_block_identity = false;
        if (ratio > report.max_ratio) {
          report.max_ratio = ratio;
          report.witness.base_rows = base.rows;
          report.witness.position = u;
          report.witness.replacement = row;
          report.witness.outcome_index = r1 >= r2 ? arg1 : arg2;
        }
      }
      neighbor.rows[u] = base.rows[u];
    }
    ++report.datasets_evaluated;
    if (exhaustive && !next_odometer(base_digits, g)) break;
  }
  report.pass = report.current_block_identity &&
                report.max_ratio <= report.bound * (1.0 + 1e-9);
  return report;
}

PrefixRatioReport per_prefix_ratio_check(int K, int m_max, double eta) {
  if (K < 2) throw std::invalid_argument("need at least 2 actions");
  if (m_max < 1) throw std::invalid_argument("m_max must be at least 1");
  PrefixRatioReport report;
  report.bound = std::exp(2.0 * eta);
  const std::uint64_t n_swaps = std::uint64_t{1} << K;
  for (int m = 1; m <= m_max; ++m) {
    // Enumerate prefix-sum vectors L in {0..m}^K; every such vector is
    // reachable by some binary dataset, and one-row neighbors are exactly
    // the swaps L -> L - x + x' with binary rows x <= L, L - x <= m-1.
    std::vector<std::size_t> digits(K, 0);
    std::vector<double> sums(K);
    do {
      for (int j = 0; j < K; ++j) sums[j] = static_cast<double>(digits[j]);
      const std::vector<double> p = softmax_weights(sums, eta);
      for (std::uint64_t old_mask = 0; old_mask < n_swaps; ++old_mask) {
        bool feasible = true;
        for (int j = 0; j < K && feasible; ++j) {
          const double x = static_cast<double>((old_mask >> j) & 1);
          feasible = sums[j] - x >= 0.0 && sums[j] - x <= m - 1;
        }
        if (!feasible) continue;
        for (std::uint64_t new_mask = 0; new_mask < n_swaps; ++new_mask) {
          std::vector<double> swapped(K);
          for (int j = 0; j < K; ++j) {
            swapped[j] = sums[j] - static_cast<double>((old_mask >> j) & 1) +
                         static_cast<double>((new_mask >> j) & 1);
          }
          const std::vector<double> q = softmax_weights(swapped, eta);
          report.max_ratio = std::max(report.max_ratio, directed_ratio(p, q, nullptr));
          report.max_ratio = std::max(report.max_ratio, directed_ratio(q, p, nullptr));
        }
      }
    } while (next_odometer(digits, static_cast<std::size_t>(m) + 1));
  }
  report.pass = report.max_ratio <= report.bound;
  return report;
}

nlohmann::json audit_report_to_json(const AuditReport& report) {
  nlohmann::json j;
  j["K"] = report.K;
  j["t"] = report.t;
  j["eta"] = report.eta;
  j["grid"] = report.grid;
  j["datasets_evaluated"] = report.datasets_evaluated;
  j["max_ratio"] = report.max_ratio;
  j["bound"] = report.bound;
  j["current_block_identity"] = report.current_block_identity;
  j["pass"] = report.pass;
  j["witness"] = {
      {"base_rows", report.witness.base_rows},
      {"position", report.witness.position},
      {"replacement", report.witness.replacement},
      {"outcome_index", report.witness.outcome_index},
  };
  return j;
}

}  // namespace rpsoftmax
