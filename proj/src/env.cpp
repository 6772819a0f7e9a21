#include "rpsoftmax/env.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace rpsoftmax {

namespace {

void validate_means(const std::vector<double>& means) {
  if (means.size() < 2) throw std::invalid_argument("need at least 2 actions");
  for (double m : means) {
    if (!std::isfinite(m) || m < 0.0 || m > 1.0) {
      throw std::invalid_argument("means must lie in [0,1]");
    }
  }
}

// All 2^K outcomes of independent Bernoulli coordinates.
void append_product_atoms(const std::vector<double>& means, double weight,
                          std::vector<Atom>& out) {
  const int K = static_cast<int>(means.size());
  if (K > 20) throw std::invalid_argument("product support too large to expand");
  const std::uint64_t n = std::uint64_t{1} << K;
  for (std::uint64_t mask = 0; mask < n; ++mask) {
    double p = weight;
    LossVector x(K);
    for (int j = 0; j < K; ++j) {
      const bool one = (mask >> j) & 1;
      x[j] = one ? 1.0 : 0.0;
      p *= one ? means[j] : 1.0 - means[j];
    }
    if (p > 0.0) out.push_back({std::move(x), p});
  }
}

// Outcomes of the shared-uniform (comonotone) coupling: x_j = 1{U <= mu_j}.
void append_comonotone_atoms(const std::vector<double>& means, double weight,
                             std::vector<Atom>& out) {
  const int K = static_cast<int>(means.size());
  std::vector<double> thresholds = means;
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
  double prev = 0.0;
  for (double v : thresholds) {
    const double seg = v - prev;
    if (seg > 0.0) {
      LossVector x(K);
      for (int j = 0; j < K; ++j) x[j] = means[j] >= v ? 1.0 : 0.0;
      out.push_back({std::move(x), weight * seg});
    }
    prev = v;
  }
  if (prev < 1.0) out.push_back({LossVector(K, 0.0), weight * (1.0 - prev)});
}

std::vector<Atom> merge_atoms(const std::vector<Atom>& atoms) {
  std::map<LossVector, double> merged;
  for (const Atom& a : atoms) {
    if (a.prob > 0.0) merged[a.losses] += a.prob;
  }
  std::vector<Atom> out;
  out.reserve(merged.size());
  for (auto& [x, p] : merged) out.push_back({x, p});
  return out;
}

}  // namespace

Environment Environment::bernoulli(const std::vector<double>& means) {
  validate_means(means);
  Environment env;
  env.kind_ = EnvKind::bernoulli;
  env.K_ = static_cast<int>(means.size());
  env.means_ = means;
  return env;
}

Environment Environment::correlated(const std::vector<double>& base_means, double coupling) {
  validate_means(base_means);
  if (!std::isfinite(coupling) || coupling < 0.0 || coupling > 1.0) {
    throw std::invalid_argument("coupling must lie in [0,1]");
  }
  Environment env;
  env.kind_ = EnvKind::correlated;
  env.K_ = static_cast<int>(base_means.size());
  env.means_ = base_means;
  env.coupling_ = coupling;
  return env;
}

Environment Environment::deterministic(const LossVector& vector) {
  if (vector.size() < 2) throw std::invalid_argument("need at least 2 actions");
  validate_loss_vector(vector, static_cast<int>(vector.size()));
  Environment env;
  env.kind_ = EnvKind::deterministic;
  env.K_ = static_cast<int>(vector.size());
  env.means_ = vector;
  env.atoms_ = {{vector, 1.0}};
  return env;
}

Environment Environment::finite_support(const std::vector<Atom>& atoms) {
  if (atoms.empty()) throw std::invalid_argument("empty atom list");
  const int K = static_cast<int>(atoms.front().losses.size());
  if (K < 2) throw std::invalid_argument("need at least 2 actions");
  double total = 0.0;
  for (const Atom& a : atoms) {
    validate_loss_vector(a.losses, K);
    if (!(a.prob >= 0.0)) throw std::invalid_argument("negative atom probability");
    total += a.prob;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("atom probabilities do not sum to 1");
  }
  Environment env;
  env.kind_ = EnvKind::finite_support;
  env.K_ = K;
  env.atoms_ = atoms;
  env.means_.assign(K, 0.0);
  for (const Atom& a : atoms) {
    for (int j = 0; j < K; ++j) env.means_[j] += a.prob * a.losses[j];
  }
  return env;
}

LossVector Environment::sample(Rng& rng) const {
  switch (kind_) {
    case EnvKind::deterministic:
      return atoms_.front().losses;
    case EnvKind::bernoulli: {
      LossVector x(K_);
      for (int j = 0; j < K_; ++j) x[j] = rng.next_double() < means_[j] ? 1.0 : 0.0;
      return x;
    }
    case EnvKind::correlated: {
      if (rng.next_double() < coupling_) {
        const double u = rng.next_double();
        LossVector x(K_);
        for (int j = 0; j < K_; ++j) x[j] = u < means_[j] ? 1.0 : 0.0;
        return x;
      }
      LossVector x(K_);
      for (int j = 0; j < K_; ++j) x[j] = rng.next_double() < means_[j] ? 1.0 : 0.0;
      return x;
    }
    case EnvKind::finite_support: {
      const double u = rng.next_double();
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < atoms_.size(); ++i) {
        acc += atoms_[i].prob;
        if (u < acc) return atoms_[i].losses;
      }
      return atoms_.back().losses;
    }
  }
  throw std::logic_error("unreachable environment kind");
}

std::vector<Atom> Environment::support_atoms() const {
  std::vector<Atom> atoms;
  switch (kind_) {
    case EnvKind::deterministic:
    case EnvKind::finite_support:
      atoms = atoms_;
      break;
    case EnvKind::bernoulli:
      append_product_atoms(means_, 1.0, atoms);
      break;
    case EnvKind::correlated:
      if (coupling_ > 0.0) append_comonotone_atoms(means_, coupling_, atoms);
      if (coupling_ < 1.0) append_product_atoms(means_, 1.0 - coupling_, atoms);
      break;
  }
  return merge_atoms(atoms);
}

}  // namespace rpsoftmax
