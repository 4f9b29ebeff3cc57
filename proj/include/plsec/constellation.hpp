#pragma once

#include <complex>
#include <vector>

namespace plsec {

// Square M-QAM constellation with unit average symbol energy. The in-phase
// and quadrature components are independent PAM alphabets, so all rate and
// MMSE quantities reduce to one-dimensional integrals over the PAM levels.
struct Constellation {
  int m = 0;                                  // modulation order M
  std::vector<double> pam_levels;             // sqrt(M) levels, ascending
  std::vector<std::complex<double>> symbols;  // all M symbols
};

// Builds the constellation for M in {4, 16, 64, 256}; throws
// std::invalid_argument otherwise.
Constellation make_constellation(int m);

struct MiEvaluation {
  double gamma = 0.0;
  double l_value = 0.0;  // bits
  double mi = 0.0;       // bits
  int hermite_order = 20;
};

// L_M(gamma) in bits: log2(M/e) at gamma = 0, decreasing to -log2(e) as
// gamma grows. `n` is the quadrature order of the evaluator (per panel).
double l_function(const Constellation& c, double gamma, int n = 20);

// I_M(gamma) = log2(M/e) - L_M(gamma), clamped to [0, log2 M].
double mutual_information(const Constellation& c, double gamma, int n = 20);

MiEvaluation evaluate_mi(const Constellation& c, double gamma, int n = 20);

// MMSE of symbol estimation at SNR gamma, summed over both signal
// dimensions; equals dI_M/dgamma in nats and lives in [0, 1].
double mmse(const Constellation& c, double gamma, int n = 20);

// Inverse of mutual_information in gamma. Requires 0 <= target < log2 M:
// negative targets throw std::invalid_argument, targets at or above log2 M
// throw std::domain_error. Convergence tolerance is in bits.
double inverse_mi(const Constellation& c, double target, int n = 20,
                  double tol = 1e-9);

}  // namespace plsec
