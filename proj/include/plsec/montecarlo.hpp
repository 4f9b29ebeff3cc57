#pragma once

#include <cstdint>

#include "plsec/constellation.hpp"
#include "plsec/secrecy.hpp"

namespace plsec {

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

enum class BaselineMetric { Asr, Sop };

// Estimates I_M(gamma) by sampling the Gaussian channel kernel directly.
// Requires n_samples >= 1e4.
McEstimate mc_mutual_information(const Constellation& c, double gamma,
                                 std::uint64_t n_samples, std::uint64_t seed);

// Estimates the ASR by drawing (gamma_B, gamma_E) pairs and evaluating the
// per-draw rate with the order-n Hermite sum. Requires n_samples >= 1e5.
McEstimate mc_asr(const SecrecyScenario& s, std::uint64_t n_samples,
                  std::uint64_t seed);

// Outage frequency of {max(I_M(gamma_B) - I_M(gamma_E), 0) < R_s} with a
// binomial standard error. Requires n_samples >= 1e5; returns exactly 1
// when R_s >= log2 M.
McEstimate mc_sop(const SecrecyScenario& s, std::uint64_t n_samples,
                  std::uint64_t seed);

// Same estimators with Gaussian-input rate log2(1 + gamma) per draw.
McEstimate mc_gaussian_baseline(const SecrecyScenario& s, BaselineMetric metric,
                                std::uint64_t n_samples, std::uint64_t seed);

}  // namespace plsec
