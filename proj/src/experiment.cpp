#include "rpsoftmax/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <thread>

namespace rpsoftmax {

namespace {

void check_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                const std::string& context) {
  if (!j.is_object()) throw std::invalid_argument(context + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw std::invalid_argument(context + ": unknown key '" + key + "'");
  }
}

const nlohmann::json& require(const nlohmann::json& j, const char* key,
                              const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) throw std::invalid_argument(context + ": missing key '" + key + "'");
  return *it;
}

std::vector<double> parse_double_vector(const nlohmann::json& j, const std::string& context) {
  if (!j.is_array()) throw std::invalid_argument(context + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw std::invalid_argument(context + ": expected numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string AlgorithmSpec::base_name() const {
  switch (kind) {
    case Kind::rp_softmax: return "rp_softmax";
    case Kind::ftl: return "ftl";
    case Kind::hedge: return "hedge";
    case Kind::laplace_rnm: return "laplace_rnm";
  }
  return "?";
}

Environment parse_environment(const nlohmann::json& j) {
  const std::string context = "environment";
  const std::string kind = require(j, "kind", context).get<std::string>();
  if (kind == "bernoulli") {
    check_keys(j, {"kind", "means"}, context);
    return Environment::bernoulli(parse_double_vector(require(j, "means", context), context));
  }
  if (kind == "correlated") {
    check_keys(j, {"kind", "means", "coupling"}, context);
    return Environment::correlated(
        parse_double_vector(require(j, "means", context), context),
        require(j, "coupling", context).get<double>());
  }
  if (kind == "deterministic") {
    check_keys(j, {"kind", "vector"}, context);
    return Environment::deterministic(parse_double_vector(require(j, "vector", context), context));
  }
  if (kind == "finite_support") {
    check_keys(j, {"kind", "atoms"}, context);
    std::vector<Atom> atoms;
    for (const auto& a : require(j, "atoms", context)) {
      check_keys(a, {"vector", "prob"}, context + ".atoms[]");
      atoms.push_back({parse_double_vector(require(a, "vector", context), context),
                       require(a, "prob", context).get<double>()});
    }
    return Environment::finite_support(atoms);
  }
  throw std::invalid_argument(context + ": unknown kind '" + kind + "'");
}

ExperimentConfig parse_config(const nlohmann::json& j) {
  check_keys(j,
             {"environment", "epsilon", "horizon", "checkpoints", "algorithms",
              "trials", "master_seed"},
             "config");
  ExperimentConfig config;
  config.env = parse_environment(require(j, "environment", "config"));

  const nlohmann::json& eps = require(j, "epsilon", "config");
  if (eps.is_number()) {
    config.epsilons = {eps.get<double>()};
  } else {
    config.epsilons = parse_double_vector(eps, "config.epsilon");
  }
  if (config.epsilons.empty()) throw std::invalid_argument("config.epsilon: empty sweep");
  for (double e : config.epsilons) eta_from_epsilon(e);  // validates

  config.horizon = require(j, "horizon", "config").get<std::uint64_t>();
  if (config.horizon < 1) throw std::invalid_argument("config.horizon: must be >= 1");

  if (j.contains("checkpoints")) {
    for (const auto& v : j.at("checkpoints")) {
      config.checkpoints.push_back(v.get<std::uint64_t>());
    }
    if (!std::is_sorted(config.checkpoints.begin(), config.checkpoints.end())) {
      throw std::invalid_argument("config.checkpoints: must be sorted ascending");
    }
    for (std::uint64_t c : config.checkpoints) {
      if (c < 1 || c > config.horizon) {
        throw std::invalid_argument("config.checkpoints: entries must lie in [1, horizon]");
      }
    }
  } else {
    for (std::uint64_t c = 1; c <= config.horizon; c *= 2) config.checkpoints.push_back(c);
    if (config.checkpoints.back() != config.horizon) config.checkpoints.push_back(config.horizon);
  }

  const nlohmann::json& algs = require(j, "algorithms", "config");
  if (!algs.is_array() || algs.empty()) {
    throw std::invalid_argument("config.algorithms: expected a nonempty array");
  }
  for (const auto& a : algs) {
    std::string name;
    AlgorithmSpec spec{};
    if (a.is_string()) {
      name = a.get<std::string>();
    } else {
      check_keys(a, {"name", "eta"}, "config.algorithms[]");
      name = require(a, "name", "config.algorithms[]").get<std::string>();
      if (a.contains("eta")) spec.hedge_eta = a.at("eta").get<double>();
    }
    if (name == "rp_softmax") spec.kind = AlgorithmSpec::Kind::rp_softmax;
    else if (name == "ftl") spec.kind = AlgorithmSpec::Kind::ftl;
    else if (name == "hedge") spec.kind = AlgorithmSpec::Kind::hedge;
    else if (name == "laplace_rnm") spec.kind = AlgorithmSpec::Kind::laplace_rnm;
    else throw std::invalid_argument("config.algorithms[]: unknown algorithm '" + name + "'");
    if (spec.kind == AlgorithmSpec::Kind::hedge && !(spec.hedge_eta > 0.0)) {
      throw std::invalid_argument("config.algorithms[]: hedge requires a positive eta");
    }
    if (spec.kind != AlgorithmSpec::Kind::hedge && spec.hedge_eta != 0.0) {
      throw std::invalid_argument("config.algorithms[]: eta is only valid for hedge");
    }
    config.algorithms.push_back(spec);
  }

  config.trials = require(j, "trials", "config").get<std::uint64_t>();
  if (config.trials < 1) throw std::invalid_argument("config.trials: must be >= 1");
  config.master_seed = require(j, "master_seed", "config").get<std::uint64_t>();

  config.env.gap_profile();  // simulate needs a unique best action
  return config;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  nlohmann::json env;
  switch (config.env.kind()) {
    case EnvKind::bernoulli:
      env = {{"kind", "bernoulli"}, {"means", config.env.means()}};
      break;
    case EnvKind::deterministic:
      env = {{"kind", "deterministic"}, {"vector", config.env.means()}};
      break;
    case EnvKind::correlated:
    case EnvKind::finite_support: {
      nlohmann::json atoms = nlohmann::json::array();
      for (const Atom& a : config.env.support_atoms()) {
        atoms.push_back({{"vector", a.losses}, {"prob", a.prob}});
      }
      env = {{"kind", "finite_support"}, {"atoms", atoms}};
      break;
    }
  }
  nlohmann::json algs = nlohmann::json::array();
  for (const AlgorithmSpec& spec : config.algorithms) {
    if (spec.kind == AlgorithmSpec::Kind::hedge) {
      algs.push_back({{"name", "hedge"}, {"eta", spec.hedge_eta}});
    } else {
      algs.push_back(spec.base_name());
    }
  }
  return {{"environment", env},
          {"epsilon", config.epsilons},
          {"horizon", config.horizon},
          {"checkpoints", config.checkpoints},
          {"algorithms", algs},
          {"trials", config.trials},
          {"master_seed", config.master_seed}};
}

std::string algorithm_label(const ExperimentConfig& config,
                            const AlgorithmSpec& spec, double epsilon) {
  std::string label = spec.base_name();
  if (spec.is_private() && config.epsilons.size() > 1) {
    label += "[eps=" + format_double(epsilon) + "]";
  }
  return label;
}

namespace {

struct Instance {
  AlgorithmSpec spec;
  double epsilon;
  std::string label;
  std::uint64_t id;  // seed-derivation algorithm id
};

std::unique_ptr<Policy> make_policy(const Instance& inst, int K, Rng rng) {
  switch (inst.spec.kind) {
    case AlgorithmSpec::Kind::rp_softmax:
      return std::make_unique<RpSoftmaxPolicy>(K, inst.epsilon, rng);
    case AlgorithmSpec::Kind::ftl:
      return std::make_unique<FtlPolicy>(K);
    case AlgorithmSpec::Kind::hedge:
      return std::make_unique<HedgePolicy>(K, inst.spec.hedge_eta, rng);
    case AlgorithmSpec::Kind::laplace_rnm:
      return std::make_unique<DyadicLaplacePolicy>(K, inst.epsilon, rng);
  }
  throw std::logic_error("unreachable algorithm kind");
}

}  // namespace

SimulateResult run_simulate(const ExperimentConfig& config, int threads) {
  const GapProfile profile = config.env.gap_profile();
  const int K = profile.K;

  // Non-private algorithms do not depend on epsilon; run them once.
  std::vector<Instance> instances;
  std::uint64_t next_id = 0;
  for (std::size_t e = 0; e < config.epsilons.size(); ++e) {
    for (const AlgorithmSpec& spec : config.algorithms) {
      if (!spec.is_private() && e > 0) continue;
      const double epsilon = config.epsilons[e];
      instances.push_back({spec, epsilon, algorithm_label(config, spec, epsilon), next_id++});
    }
  }

  std::vector<std::vector<RegretTrace>> traces(instances.size());
  for (auto& v : traces) v.resize(config.trials);

  const std::uint64_t n_tasks = instances.size() * config.trials;
  std::atomic<std::uint64_t> next_task{0};
  auto worker = [&]() {
    for (;;) {
      const std::uint64_t task = next_task.fetch_add(1);
      if (task >= n_tasks) return;
      const std::size_t inst = task / config.trials;
      const std::uint64_t trial = task % config.trials;
      const std::uint64_t seed =
          derive_seed(config.master_seed, instances[inst].id, trial);
      Rng policy_rng(splitmix64(seed ^ 0xa5a5a5a5a5a5a5a5ULL));
      Rng env_rng(splitmix64(seed ^ 0x5a5a5a5a5a5a5a5aULL));
      std::unique_ptr<Policy> policy = make_policy(instances[inst], K, policy_rng);
      traces[inst][trial] =
          run_episode(*policy, config.env, config.horizon, env_rng, config.checkpoints);
    }
  };
  int n_threads = threads;
  if (n_threads <= 0) n_threads = static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads < 1) n_threads = 1;
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SimulateResult result;
  result.csv = "algorithm,trial,t,pseudoregret\n";
  for (std::size_t inst = 0; inst < instances.size(); ++inst) {
    for (std::uint64_t trial = 0; trial < config.trials; ++trial) {
      for (const auto& [t, regret] : traces[inst][trial].checkpoints) {
        result.csv += instances[inst].label;
        result.csv += ',';
        result.csv += std::to_string(trial);
        result.csv += ',';
        result.csv += std::to_string(t);
        result.csv += ',';
        result.csv += format_double(regret);
        result.csv += '\n';
      }
    }
  }

  nlohmann::json per_algorithm = nlohmann::json::object();
  for (std::size_t inst = 0; inst < instances.size(); ++inst) {
    const std::vector<SummaryRow> rows = regret_summary(traces[inst], profile.max_gap());
    nlohmann::json checkpoints = nlohmann::json::array();
    for (const SummaryRow& row : rows) {
      checkpoints.push_back({{"t", row.t},
                             {"mean", row.mean},
                             {"hoeffding_halfwidth", row.hoeffding_halfwidth},
                             {"stddev_halfwidth", row.stddev_halfwidth}});
    }
    per_algorithm[instances[inst].label] = {{"epsilon", instances[inst].epsilon},
                                            {"checkpoints", checkpoints}};
  }

  nlohmann::json bounds = nlohmann::json::object();
  for (double epsilon : config.epsilons) {
    const TheoremBound bound = theorem_bound(K, profile.delta_min, epsilon);
    bounds[format_double(epsilon)] = {
        {"eta", bound.eta}, {"tight", bound.tight}, {"relaxed", bound.relaxed}};
  }

  result.summary = {{"version", kVersionString},
                    {"config", config_to_json(config)},
                    {"gap_profile",
                     {{"best_action", profile.best_action},
                      {"delta_min", profile.delta_min},
                      {"gaps", profile.gaps}}},
                    {"algorithms", per_algorithm},
                    {"bounds", bounds}};
  return result;
}

}  // namespace rpsoftmax
