#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "rpsoftmax/analysis.hpp"
#include "rpsoftmax/audit.hpp"
#include "rpsoftmax/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitAssertion = 2;
constexpr int kExitIo = 3;

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::ios_base::failure("cannot open " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot write " + path.string());
  out << content;
  if (!out) throw std::ios_base::failure("write failed for " + path.string());
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 int threads, bool seed_override, std::uint64_t seed) {
  rpsoftmax::ExperimentConfig config = rpsoftmax::parse_config(load_json(config_path));
  if (seed_override) config.master_seed = seed;
  const rpsoftmax::SimulateResult result = rpsoftmax::run_simulate(config, threads);
  const std::filesystem::path dir(out_dir);
  write_file(dir / "results.csv", result.csv);
  write_file(dir / "summary.json", result.summary.dump(2) + "\n");
  std::cout << "wrote " << (dir / "results.csv").string() << " and "
            << (dir / "summary.json").string() << "\n";
  return kExitOk;
}

int cmd_audit(int K, std::uint64_t t, double epsilon,
              const std::vector<double>& grid, std::uint64_t datasets,
              std::uint64_t seed, const std::string& out_dir) {
  const rpsoftmax::PrivacyParams params = rpsoftmax::eta_from_epsilon(epsilon);
  rpsoftmax::Rng rng(seed);
  const rpsoftmax::AuditReport report =
      rpsoftmax::audit_sweep(K, t, params.eta, grid, datasets, rng);
  nlohmann::json j = rpsoftmax::audit_report_to_json(report);
  j["epsilon"] = epsilon;
  j["version"] = rpsoftmax::kVersionString;
  write_file(std::filesystem::path(out_dir) / "audit.json", j.dump(2) + "\n");
  std::cout << "max_ratio " << format_double(report.max_ratio) << " bound "
            << format_double(report.bound) << (report.pass ? " PASS" : " FAIL") << "\n";
  return report.pass ? kExitOk : kExitAssertion;
}

int cmd_fm(const std::string& config_path, int m_max, double epsilon,
           std::uint64_t samples, std::uint64_t seed, const std::string& out_dir) {
  const nlohmann::json j = load_json(config_path);
  const rpsoftmax::Environment env =
      rpsoftmax::parse_environment(j.contains("environment") ? j.at("environment") : j);
  const rpsoftmax::PrivacyParams params = rpsoftmax::eta_from_epsilon(epsilon);
  rpsoftmax::Rng rng(seed);
  std::string csv = "m,method,value,ci_halfwidth,samples\n";
  for (int m = 1; m <= m_max; ++m) {
    rpsoftmax::FmEstimate est;
    try {
      est = rpsoftmax::fm_exact(env, m, params.eta);
    } catch (const std::invalid_argument&) {
      est = rpsoftmax::fm_monte_carlo(env, m, params.eta, samples, rng);
    }
    csv += std::to_string(m);
    csv += est.method == rpsoftmax::FmEstimate::Method::exact ? ",exact," : ",monte_carlo,";
    csv += format_double(est.value);
    csv += ',';
    csv += format_double(est.ci_halfwidth);
    csv += ',';
    csv += std::to_string(est.samples);
    csv += '\n';
  }
  write_file(std::filesystem::path(out_dir) / "fm.csv", csv);
  std::cout << "wrote " << (std::filesystem::path(out_dir) / "fm.csv").string() << "\n";
  return kExitOk;
}

int cmd_bounds(int K, double delta_min, double epsilon, const std::string& out_dir) {
  const rpsoftmax::TheoremBound bound = rpsoftmax::theorem_bound(K, delta_min, epsilon);
  const double master = rpsoftmax::master_bound_value(K, delta_min, bound.eta);
  nlohmann::json j = {{"version", rpsoftmax::kVersionString},
                      {"K", K},
                      {"delta_min", delta_min},
                      {"epsilon", epsilon},
                      {"eta", bound.eta},
                      {"tight", bound.tight},
                      {"relaxed", bound.relaxed},
                      {"master_lemma_value", master}};
  write_file(std::filesystem::path(out_dir) / "bounds.json", j.dump(2) + "\n");
  std::cout << "eta " << format_double(bound.eta) << "\ntight " << format_double(bound.tight)
            << "\nrelaxed " << format_double(bound.relaxed) << "\nmaster "
            << format_double(master) << "\n";
  return kExitOk;
}

int cmd_selftest() {
  const rpsoftmax::InequalityReport report = rpsoftmax::inequality_suite();
  bool ok = report.pass;
  for (const auto& item : report.items) {
    std::cout << (item.pass ? "[pass] " : "[FAIL] ") << item.name
              << " worst margin " << format_double(item.worst_margin) << "\n";
  }

  // Core invariant grids.
  bool partition_ok = true;
  for (std::uint64_t t = 1; t <= (1u << 20); ++t) {
    const int r = rpsoftmax::block_of(t);
    partition_ok = partition_ok && rpsoftmax::block_start(r) <= t &&
                   t <= rpsoftmax::block_end(r);
  }
  std::cout << (partition_ok ? "[pass] " : "[FAIL] ") << "dyadic block partition up to 2^20\n";
  ok = ok && partition_ok;

  bool eta_ok = true;
  double prev = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double eta = rpsoftmax::eta_from_epsilon(i * 0.01).eta;
    eta_ok = eta_ok && eta >= prev && eta <= 0.125;
    prev = eta;
  }
  std::cout << (eta_ok ? "[pass] " : "[FAIL] ") << "eta monotone and capped at 1/8\n";
  ok = ok && eta_ok;

  return ok ? kExitOk : kExitAssertion;
}

std::vector<double> parse_grid(const std::string& grid_str) {
  std::vector<double> grid;
  std::stringstream ss(grid_str);
  std::string item;
  while (std::getline(ss, item, ',')) grid.push_back(std::stod(item));
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"randomized-prefix softmax private online learning toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_dir = ".";
  int threads = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads (0 = auto)");
  auto* seed_opt = app.add_option("--seed", seed, "master seed override");

  auto* simulate = app.add_subcommand("simulate", "run regret experiments from a config file");
  std::string config_path;
  simulate->add_option("--config", config_path, "JSON config file")->required();

  auto* audit = app.add_subcommand("audit", "exact neighbor-law privacy audit");
  int audit_K = 2;
  std::uint64_t audit_t = 7;
  double audit_epsilon = 0.25;
  std::string grid_str = "0,1";
  std::uint64_t audit_datasets = 0;
  audit->add_option("--K", audit_K, "action count");
  audit->add_option("--t", audit_t, "horizon");
  audit->add_option("--epsilon", audit_epsilon, "privacy budget")->required();
  audit->add_option("--grid", grid_str, "comma-separated loss grid (default 0,1)");
  audit->add_option("--datasets", audit_datasets,
                    "sampled base datasets (0 = exhaustive over the grid)");

  auto* fm = app.add_subcommand("fm", "per-prefix softmax error estimates");
  std::string fm_config;
  int fm_m_max = 16;
  double fm_epsilon = 1.0;
  std::uint64_t fm_samples = 100000;
  fm->add_option("--config", fm_config, "JSON file with an environment spec")->required();
  fm->add_option("--m-max", fm_m_max, "largest prefix length");
  fm->add_option("--epsilon", fm_epsilon, "privacy budget")->required();
  fm->add_option("--samples", fm_samples, "Monte Carlo samples per m");

  auto* bounds = app.add_subcommand("bounds", "print the regret bound values");
  int bounds_K = 2;
  double bounds_delta = 1.0;
  double bounds_epsilon = 1.0;
  bounds->add_option("--K", bounds_K, "action count")->required();
  bounds->add_option("--delta-min", bounds_delta, "minimum gap")->required();
  bounds->add_option("--epsilon", bounds_epsilon, "privacy budget")->required();

  auto* selftest = app.add_subcommand("selftest", "run the inequality and invariant grids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitValidation;
  }
  seed_set = seed_opt->count() > 0;

  try {
    if (*simulate) return cmd_simulate(config_path, out_dir, threads, seed_set, seed);
    if (*audit) {
      return cmd_audit(audit_K, audit_t, audit_epsilon, parse_grid(grid_str),
                       audit_datasets, seed_set ? seed : 0, out_dir);
    }
    if (*fm) return cmd_fm(fm_config, fm_m_max, fm_epsilon, fm_samples, seed_set ? seed : 0, out_dir);
    if (*bounds) return cmd_bounds(bounds_K, bounds_delta, bounds_epsilon, out_dir);
    if (*selftest) return cmd_selftest();
  } catch (const rpsoftmax::EnumerationBudgetExceeded& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAssertion;
  }
  return kExitValidation;
}
