#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rpsoftmax/analysis.hpp"
#include "rpsoftmax/audit.hpp"
#include "rpsoftmax/experiment.hpp"

namespace py = pybind11;
using namespace rpsoftmax;

namespace {

Environment env_from_json_str(const std::string& spec) {
  return parse_environment(nlohmann::json::parse(spec));
}

std::vector<std::pair<std::uint64_t, double>> py_run_episode(
    const std::string& algorithm, const std::string& env_spec, double epsilon,
    double hedge_eta, std::uint64_t T, std::uint64_t seed,
    const std::vector<std::uint64_t>& checkpoints) {
  const Environment env = env_from_json_str(env_spec);
  const int K = env.action_count();
  Rng policy_rng(splitmix64(seed ^ 0xa5a5a5a5a5a5a5a5ULL));
  Rng env_rng(splitmix64(seed ^ 0x5a5a5a5a5a5a5a5aULL));
  std::unique_ptr<Policy> policy;
  if (algorithm == "rp_softmax") {
    policy = std::make_unique<RpSoftmaxPolicy>(K, epsilon, policy_rng);
  } else if (algorithm == "ftl") {
    policy = std::make_unique<FtlPolicy>(K);
  } else if (algorithm == "hedge") {
    policy = std::make_unique<HedgePolicy>(K, hedge_eta, policy_rng);
  } else if (algorithm == "laplace_rnm") {
    policy = std::make_unique<DyadicLaplacePolicy>(K, epsilon, policy_rng);
  } else {
    throw std::invalid_argument("unknown algorithm '" + algorithm + "'");
  }
  return run_episode(*policy, env, T, env_rng, checkpoints).checkpoints;
}

}  // namespace

PYBIND11_MODULE(_rpsoftmax, m) {
  m.doc() = "randomized-prefix softmax private online learning";
  m.attr("__version__") = "0.1.0";

  m.def("eta_from_epsilon", [](double epsilon) { return eta_from_epsilon(epsilon).eta; },
        py::arg("epsilon"));
  m.def("block_of", &block_of, py::arg("t"));
  m.def("prefix_window", [](int r) {
          const PrefixWindow w = prefix_window(r);
          return std::make_pair(w.lo, w.hi);
        },
        py::arg("r"), "Inclusive (lo, hi) range of prefix lengths for block r");
  m.def("softmax_weights", &softmax_weights, py::arg("losses"), py::arg("eta"));
  m.def("theorem_bound", [](int K, double delta_min, double epsilon) {
          const TheoremBound b = theorem_bound(K, delta_min, epsilon);
          return py::dict(py::arg("eta") = b.eta, py::arg("tight") = b.tight,
                          py::arg("relaxed") = b.relaxed);
        },
        py::arg("K"), py::arg("delta_min"), py::arg("epsilon"));
  m.def("master_bound_value", &master_bound_value, py::arg("K"), py::arg("delta_min"),
        py::arg("eta"));
  m.def("hoeffding_bound", &hoeffding_bound, py::arg("m"), py::arg("mu"));
  m.def("gap_profile_from_means", [](const std::vector<double>& means) {
          const GapProfile p = gap_profile_from_means(means);
          return py::dict(py::arg("best_action") = p.best_action,
                          py::arg("gaps") = p.gaps, py::arg("delta_min") = p.delta_min);
        },
        py::arg("means"));

  m.def("run_episode", &py_run_episode, py::arg("algorithm"), py::arg("environment"),
        py::arg("epsilon") = 1.0, py::arg("hedge_eta") = 0.0, py::arg("T") = 1024,
        py::arg("seed") = 0, py::arg("checkpoints") = std::vector<std::uint64_t>{},
        "Run one episode; environment is a JSON spec string. Returns "
        "[(t, cumulative pseudoregret), ...].");

  m.def("exact_output_law", [](const std::vector<LossVector>& rows, double eta) {
          return exact_output_law(AuditDataset{rows}, eta).probs;
        },
        py::arg("rows"), py::arg("eta"));
  m.def("audit_sweep", [](int K, std::uint64_t t, double epsilon,
                          const std::vector<double>& grid, std::uint64_t datasets,
                          std::uint64_t seed) {
          Rng rng(seed);
          const AuditReport report =
              audit_sweep(K, t, eta_from_epsilon(epsilon).eta, grid, datasets, rng);
          return audit_report_to_json(report).dump();
        },
        py::arg("K"), py::arg("t"), py::arg("epsilon"),
        py::arg("grid") = std::vector<double>{0.0, 1.0}, py::arg("datasets") = 0,
        py::arg("seed") = 0, "Returns the audit report as a JSON string.");

  m.def("fm_exact", [](const std::string& env_spec, int mm, double eta) {
          return fm_exact(env_from_json_str(env_spec), mm, eta).value;
        },
        py::arg("environment"), py::arg("m"), py::arg("eta"));
  m.def("fm_monte_carlo", [](const std::string& env_spec, int mm, double eta,
                             std::uint64_t n, std::uint64_t seed) {
          Rng rng(seed);
          const FmEstimate est = fm_monte_carlo(env_from_json_str(env_spec), mm, eta, n, rng);
          return std::make_pair(est.value, est.ci_halfwidth);
        },
        py::arg("environment"), py::arg("m"), py::arg("eta"), py::arg("samples"),
        py::arg("seed") = 0);

  m.def("inequality_suite", []() { return inequality_suite().pass; });

  m.def("simulate", [](const std::string& config, int threads) {
          const SimulateResult result =
              run_simulate(parse_config(nlohmann::json::parse(config)), threads);
          return std::make_pair(result.csv, result.summary.dump());
        },
        py::arg("config"), py::arg("threads") = 1,
        "Run the experiment described by a JSON config string; returns "
        "(results_csv, summary_json).");
}
