#include "plsec/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "plsec/quadrature.hpp"
#include "plsec/rng.hpp"

namespace plsec {

namespace {

constexpr double kLog2E = 1.4426950408889634;
constexpr double kExpWindow = 45.0;

void check_samples(std::uint64_t n_samples, std::uint64_t minimum) {
  if (n_samples < minimum)
    throw std::invalid_argument("n_samples below the supported minimum");
}

// Per-draw rate kernel: the plain order-n Hermite sum for log2 M - I_M.
// Cheap enough for millions of fading draws; its O(1e-4) quadrature bias is
// far below the Monte Carlo standard errors it is paired with.
double mi_hermite(const Constellation& c, double gamma, int n) {
  const QuadratureRule& rule = quad_rule(QuadKind::Hermite, n);
  const auto& p = c.pam_levels;
  const int r = static_cast<int>(p.size());
  const double s = std::sqrt(gamma);
  double total = 0.0;
  for (int j = 0; j < r; ++j) {
    for (int q = 0; q < n; ++q) {
      double t = rule.nodes[q];
      double emax = 0.0;
      for (int k = 0; k < r; ++k) {
        double a = s * (p[j] - p[k]);
        double e = -a * (2.0 * t + a);
        if (e > emax) emax = e;
      }
      double sum = 0.0;
      for (int k = 0; k < r; ++k) {
        double a = s * (p[j] - p[k]);
        double e = -a * (2.0 * t + a) - emax;
        if (e > -kExpWindow) sum += std::exp(e);
      }
      total += rule.weights[q] * (emax + std::log(sum)) * kLog2E;
    }
  }
  double gap = total * 2.0 / (r * std::sqrt(M_PI));
  double log2m = std::log2(static_cast<double>(c.m));
  return std::clamp(log2m - gap, 0.0, log2m);
}

struct Accumulator {
  double sum = 0.0;
  double sumsq = 0.0;
  std::uint64_t n = 0;

  void add(double x) {
    sum += x;
    sumsq += x * x;
    ++n;
  }
  double mean() const { return sum / n; }
  double std_error() const {
    double m = mean();
    double var = std::max(sumsq / n - m * m, 0.0);
    return std::sqrt(var / n);
  }
};

double gaussian_rate(double gamma) { return std::log2(1.0 + gamma); }

}  // namespace

McEstimate mc_mutual_information(const Constellation& c, double gamma,
                                 std::uint64_t n_samples, std::uint64_t seed) {
  check_samples(n_samples, 10000);
  if (!(gamma >= 0.0)) throw std::invalid_argument("snr must be nonnegative");
  const auto& p = c.pam_levels;
  const int r = static_cast<int>(p.size());
  const double s = std::sqrt(gamma);
  const double noise_sd = std::sqrt(0.5);
  Rng rng(split_stream(seed, 0));

  Accumulator acc;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    double value = 0.0;
    for (int j = 0; j < r; ++j) {
      double u = s * p[j] + noise_sd * rng.normal();
      double emax = -std::numeric_limits<double>::infinity();
      for (int k = 0; k < r; ++k) {
        double d = u - s * p[k];
        double e = -d * d;
        if (e > emax) emax = e;
      }
      double sum = 0.0;
      for (int k = 0; k < r; ++k) {
        double d = u - s * p[k];
        double e = -d * d - emax;
        if (e > -kExpWindow) sum += std::exp(e);
      }
      value += (emax + std::log(sum)) * kLog2E;
    }
    acc.add(value * 2.0 / r);
  }
  McEstimate est;
  est.value = std::log2(static_cast<double>(c.m)) - kLog2E - acc.mean();
  est.std_error = acc.std_error();
  est.n_samples = n_samples;
  est.seed = seed;
  return est;
}

McEstimate mc_asr(const SecrecyScenario& s, std::uint64_t n_samples,
                  std::uint64_t seed) {
  check_samples(n_samples, 100000);
  Rng rng(split_stream(seed, 0));
  Accumulator acc;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    double gb = sample_one(s.main, rng);
    double ge = sample_one(s.eve, rng);
    double rate = mi_hermite(s.constellation, gb, s.hermite_order) -
                  mi_hermite(s.constellation, ge, s.hermite_order);
    acc.add(std::max(rate, 0.0));
  }
  McEstimate est;
  est.value = acc.mean();
  est.std_error = acc.std_error();
  est.n_samples = n_samples;
  est.seed = seed;
  return est;
}

McEstimate mc_sop(const SecrecyScenario& s, std::uint64_t n_samples,
                  std::uint64_t seed) {
  check_samples(n_samples, 100000);
  if (!(s.target_rate > 0.0))
    throw std::invalid_argument("target rate must be positive");
  McEstimate est;
  est.n_samples = n_samples;
  est.seed = seed;
  if (s.target_rate >= std::log2(static_cast<double>(s.constellation.m))) {
    est.value = 1.0;
    est.std_error = 0.0;
    return est;
  }
  Rng rng(split_stream(seed, 0));
  std::uint64_t outages = 0;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    double gb = sample_one(s.main, rng);
    double ge = sample_one(s.eve, rng);
    double rate = mi_hermite(s.constellation, gb, s.hermite_order) -
                  mi_hermite(s.constellation, ge, s.hermite_order);
    if (std::max(rate, 0.0) < s.target_rate) ++outages;
  }
  double p = static_cast<double>(outages) / n_samples;
  est.value = p;
  est.std_error = std::sqrt(p * (1.0 - p) / n_samples);
  return est;
}

McEstimate mc_gaussian_baseline(const SecrecyScenario& s, BaselineMetric metric,
                                std::uint64_t n_samples, std::uint64_t seed) {
  check_samples(n_samples, 100000);
  McEstimate est;
  est.n_samples = n_samples;
  est.seed = seed;
  Rng rng(split_stream(seed, 0));
  if (metric == BaselineMetric::Asr) {
    Accumulator acc;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
      double gb = sample_one(s.main, rng);
      double ge = sample_one(s.eve, rng);
      acc.add(std::max(gaussian_rate(gb) - gaussian_rate(ge), 0.0));
    }
    est.value = acc.mean();
    est.std_error = acc.std_error();
    return est;
  }
  if (!(s.target_rate > 0.0))
    throw std::invalid_argument("target rate must be positive");
  std::uint64_t outages = 0;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    double gb = sample_one(s.main, rng);
    double ge = sample_one(s.eve, rng);
    if (std::max(gaussian_rate(gb) - gaussian_rate(ge), 0.0) < s.target_rate)
      ++outages;
  }
  double p = static_cast<double>(outages) / n_samples;
  est.value = p;
  est.std_error = std::sqrt(p * (1.0 - p) / n_samples);
  return est;
}

}  // namespace plsec
