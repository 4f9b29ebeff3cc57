#pragma once

#include <vector>

#include "plsec/constellation.hpp"
#include "plsec/fading.hpp"

namespace plsec {

// Wiretap-channel evaluation setup: Bob's and Eve's SNR distributions, the
// input constellation, quadrature order knobs, and the SOP target rate.
struct SecrecyScenario {
  MixtureGamma main;           // Bob
  MixtureGamma eve;            // Eve
  Constellation constellation;
  int hermite_order = 20;      // mutual-information evaluator order
  int laguerre_order = 30;     // rate-integral order (per segment)
  int legendre_order = 30;     // outage-integral order (per segment)
  double target_rate = 1.0;    // R_s in bits, used by SOP only
};

struct AsrResult {
  double asr = 0.0;    // bits, in [0, log2 M]
  double i_lim = 0.0;  // high-SNR ceiling log2 M - E[I_M(gamma_E)]
  double i1 = 0.0;     // components satisfying asr = i3 - i2 - i1
  double i2 = 0.0;
  double i3 = 0.0;
};

struct SopResult {
  double sop = 0.0;        // probability in [0, 1]
  double h_m = 0.0;        // SNR threshold I_M^-1(log2 M - R_s)
  double limit_sop = 0.0;  // 1 - F_E(H_M), the high-SNR floor
  bool degenerate_threshold = false;  // R_s >= log2 M, outage certain
};

struct AsrAsymptote {
  double i_lim = 0.0;
  double g_a_asr = 0.0;  // i_lim - asr ~ g_a_asr * avg_snr_main^-g_d
  double g_d = 0.0;      // secrecy diversity order
  std::vector<double> theta;
};

struct SopAsymptote {
  double limit_sop = 0.0;
  double g_a_sop = 0.0;  // sop - limit_sop ~ g_a_sop * avg_snr_main^-g_d
  double g_d = 0.0;
  std::vector<double> delta;
};

struct AsymptoticSecrecy {
  double g_d = 0.0;
  double g_a_asr = 0.0;
  double g_a_sop = 0.0;
  std::vector<double> theta;
  std::vector<double> delta;
};

// Average secrecy rate E[max(I_M(gamma_B) - I_M(gamma_E), 0)] with its
// ceiling and decomposition components.
AsrResult asr(const SecrecyScenario& s);

// Ceiling alone: log2 M - E[I_M(gamma_E)].
double i_lim(const SecrecyScenario& s);

// Secrecy outage probability at target_rate. Throws std::invalid_argument
// for target_rate <= 0; returns sop = 1 with the degenerate flag when
// target_rate >= log2 M.
SopResult sop(const SecrecyScenario& s);

// High-SNR coefficients. Both throw std::domain_error when the main
// channel's family has no known expansion.
AsrAsymptote asymptotic_asr(const SecrecyScenario& s);
SopAsymptote asymptotic_sop(const SecrecyScenario& s);
AsymptoticSecrecy asymptotic_secrecy(const SecrecyScenario& s);

}  // namespace plsec
