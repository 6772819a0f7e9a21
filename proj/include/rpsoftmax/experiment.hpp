#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rpsoftmax/analysis.hpp"
#include "rpsoftmax/env.hpp"
#include "rpsoftmax/policy.hpp"

#include "json.hpp"

namespace rpsoftmax {

inline constexpr const char* kVersionString = "rpsoftmax 0.1.0";

struct AlgorithmSpec {
  enum class Kind { rp_softmax, ftl, hedge, laplace_rnm } kind;
  double hedge_eta = 0.0;  // hedge only

  bool is_private() const {
    return kind == Kind::rp_softmax || kind == Kind::laplace_rnm;
  }
  std::string base_name() const;
};

struct ExperimentConfig {
  Environment env = Environment::deterministic({0.0, 1.0});
  std::vector<double> epsilons;           // one entry unless sweeping
  std::uint64_t horizon = 0;
  std::vector<std::uint64_t> checkpoints;  // sorted; defaults to powers of two
  std::vector<AlgorithmSpec> algorithms;
  std::uint64_t trials = 0;
  std::uint64_t master_seed = 0;
};

// Strict parse: unknown keys anywhere in the document are errors.
// Throws std::invalid_argument with a field-level message.
ExperimentConfig parse_config(const nlohmann::json& j);

nlohmann::json config_to_json(const ExperimentConfig& config);

Environment parse_environment(const nlohmann::json& j);

// Label used in the CSV algorithm column; private algorithms carry the
// epsilon when the config sweeps more than one value.
std::string algorithm_label(const ExperimentConfig& config,
                            const AlgorithmSpec& spec, double epsilon);

struct SimulateResult {
  std::string csv;           // header algorithm,trial,t,pseudoregret
  nlohmann::json summary;
};

// Runs trials x algorithm instances with seeds derived from the master seed.
// Output is byte-identical for any thread count. threads == 0 picks the
// hardware concurrency.
SimulateResult run_simulate(const ExperimentConfig& config, int threads);

}  // namespace rpsoftmax
