#pragma once

#include <cstdint>
#include <random>

namespace plsec {

// Derives the engine seed for sub-stream `index` of a master seed. Splitting
// is deterministic, so sharded runs reproduce the single-stream layout.
std::uint64_t split_stream(std::uint64_t seed, std::uint64_t index);

// Deterministic sampler built on mt19937_64. The distribution transforms are
// fixed here (not delegated to std:: distributions) so that identical seeds
// produce identical draws on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on (0, 1), endpoints excluded.
  double uniform();

  // Standard normal via Box-Muller.
  double normal();
  double normal(double mean, double stddev);

  // Gamma(shape, rate) via Marsaglia-Tsang squeeze, with the power boost for
  // shape < 1. Requires shape > 0 and rate > 0.
  double gamma(double shape, double rate);

 private:
  std::mt19937_64 eng_;
};

}  // namespace plsec
