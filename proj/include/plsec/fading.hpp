#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "plsec/rng.hpp"

namespace plsec {

enum class FadingFamily { Nakagami, Hoyt, GeneralizedK, KappaMu, Custom };

// One mixture term alpha * gamma^(beta-1) * exp(-zeta * gamma) of the SNR
// density. All three parameters are positive.
struct MgComponent {
  double alpha = 0.0;
  double beta = 0.0;
  double zeta = 0.0;
};

// Mixture-Gamma SNR distribution. Construction normalizes the component
// weights exactly (sum alpha_l Gamma(beta_l) zeta_l^-beta_l = 1); numerics
// run on the stored log-weights so extreme parameters stay stable.
struct MixtureGamma {
  std::vector<MgComponent> components;
  double avg_snr = 0.0;  // mean SNR (linear)
  FadingFamily family_tag = FadingFamily::Custom;

  // log of the normalized component probabilities w_l = alpha_l Gamma(beta_l)
  // zeta_l^-beta_l; kept alongside the materialized components.
  std::vector<double> log_weight;
};

// Power-law expansion of the cdf near the origin: F(gamma) ~ sum_l phi_l *
// gamma^lambda_l * avg_snr^-psi_l. Terms are sorted by psi ascending and
// only the dominant-psi group is retained.
struct AsymptoticTerm {
  double phi = 0.0;
  double lambda = 0.0;
  double psi = 0.0;
};

struct AsymptoticExpansion {
  std::vector<AsymptoticTerm> terms;
  double dominant_psi = 0.0;
};

// Constructors for the supported fading families. All require avg_snr > 0.
MixtureGamma from_nakagami(double m, double avg_snr);            // m >= 0.5
MixtureGamma from_hoyt(double q, double avg_snr);                // 0 < q < 1
MixtureGamma from_generalized_k(double k, double m, double avg_snr);  // k,m > 0
MixtureGamma from_kappa_mu(double kappa, double mu, double avg_snr);  // both > 0

// Builds a custom mixture from explicit components; enforces the
// normalization invariant within 1e-4 and throws std::invalid_argument
// otherwise.
MixtureGamma from_components(std::vector<MgComponent> components,
                             double avg_snr);

// Loads a custom mixture from a text file: an `avg_snr <value>` line plus
// one `<alpha> <beta> <zeta>` triple per line; '#' starts a comment.
MixtureGamma load_mixture_file(const std::string& path);

// Density at gamma >= 0. Returns +infinity at gamma = 0 when any component
// has beta < 1 (integrable singularity marker).
double pdf(const MixtureGamma& d, double gamma);

// Distribution function, clamped to [0, 1].
double cdf(const MixtureGamma& d, double gamma);

// Mixture mean, which matches avg_snr up to the family's fixed-L truncation.
double mean(const MixtureGamma& d);

// Dominant small-gamma expansion per family. Throws std::domain_error for
// FadingFamily::Custom (no known expansion).
AsymptoticExpansion asymptotic_expansion(const MixtureGamma& d);

// Draws `count` SNR samples: component choice by weight, then a Gamma
// variate with shape beta_l and rate zeta_l.
std::vector<double> sample(const MixtureGamma& d, Rng& rng, std::size_t count);

// Single draw from the mixture.
double sample_one(const MixtureGamma& d, Rng& rng);

const char* family_name(FadingFamily family);

}  // namespace plsec
