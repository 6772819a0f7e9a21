#pragma once

#include <cstdint>
#include <random>

namespace rpsoftmax {

// splitmix64 finalizer; used both for seed derivation and stream splitting.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stateless seed derivation: master seed + (algorithm, trial) -> stream seed.
inline std::uint64_t derive_seed(std::uint64_t master_seed,
                                 std::uint64_t algorithm_id,
                                 std::uint64_t trial_index) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ splitmix64(algorithm_id ^ 0x517cc1b727220a95ULL));
  h = splitmix64(h ^ splitmix64(trial_index ^ 0x6c62272e07bb0142ULL));
  return h;
}

// Deterministic random stream. Only raw mt19937_64 output is used (that
// sequence is pinned by the standard), so draws are bit-reproducible across
// platforms and stdlib versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1), 53 random bits.
  double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), unbiased via rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  // Derive an independent child stream without disturbing callers that share
  // the parent deterministically.
  Rng split() { return Rng(splitmix64(engine_())); }

 private:
  std::mt19937_64 engine_;
};

// Standard inverse-CDF Laplace(0, scale) sample.
double sample_laplace(Rng& rng, double scale);

}  // namespace rpsoftmax
