#include "plsec/fading.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "plsec/quadrature.hpp"
#include "plsec/special.hpp"

namespace plsec {

namespace {

constexpr int kHoytTerms = 20;
constexpr int kGeneralizedKTerms = 15;
constexpr int kKappaMuTerms = 20;

double logsumexp(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// Finalizes a mixture from per-component log weights: normalizes so the
// probabilities sum to one exactly and materializes the alpha coefficients.
MixtureGamma finalize(std::vector<double> logw, std::vector<double> beta,
                      std::vector<double> zeta, double avg_snr,
                      FadingFamily family) {
  double norm = logsumexp(logw);
  MixtureGamma d;
  d.avg_snr = avg_snr;
  d.family_tag = family;
  d.log_weight.resize(logw.size());
  d.components.resize(logw.size());
  for (std::size_t i = 0; i < logw.size(); ++i) {
    d.log_weight[i] = logw[i] - norm;
    double log_alpha = d.log_weight[i] - std::lgamma(beta[i]) +
                       beta[i] * std::log(zeta[i]);
    d.components[i] = {std::exp(log_alpha), beta[i], zeta[i]};
  }
  return d;
}

void check_avg_snr(double avg_snr) {
  if (!(avg_snr > 0.0) || std::isinf(avg_snr))
    throw std::invalid_argument("avg_snr must be positive and finite");
}

}  // namespace

const char* family_name(FadingFamily family) {
  switch (family) {
    case FadingFamily::Nakagami: return "nakagami";
    case FadingFamily::Hoyt: return "hoyt";
    case FadingFamily::GeneralizedK: return "generalized_k";
    case FadingFamily::KappaMu: return "kappa_mu";
    case FadingFamily::Custom: return "custom";
  }
  return "unknown";
}

MixtureGamma from_nakagami(double m, double avg_snr) {
  if (!(m >= 0.5)) throw std::invalid_argument("nakagami requires m >= 0.5");
  check_avg_snr(avg_snr);
  return finalize({0.0}, {m}, {m / avg_snr}, avg_snr, FadingFamily::Nakagami);
}

MixtureGamma from_hoyt(double q, double avg_snr) {
  if (!(q > 0.0 && q < 1.0))
    throw std::invalid_argument("hoyt requires 0 < q < 1");
  check_avg_snr(avg_snr);
  const int L = kHoytTerms;
  double q2 = q * q;
  double zeta = (1.0 + q2) * (1.0 + q2) / (4.0 * q2 * avg_snr);
  double log_lead = std::log((1.0 + q2) / (2.0 * q * avg_snr));
  double log_ratio = std::log((1.0 - q2 * q2) / (8.0 * q2 * avg_snr));
  std::vector<double> logw(L), beta(L), zetas(L, zeta);
  for (int l = 1; l <= L; ++l) {
    double b = 2.0 * l - 1.0;
    beta[l - 1] = b;
    double logtheta =
        log_lead - 2.0 * std::lgamma(static_cast<double>(l)) +
        (2.0 * l - 2.0) * log_ratio;
    logw[l - 1] = logtheta + std::lgamma(b) - b * std::log(zeta);
  }
  return finalize(std::move(logw), std::move(beta), std::move(zetas), avg_snr,
                  FadingFamily::Hoyt);
}

MixtureGamma from_generalized_k(double k, double m, double avg_snr) {
  if (!(k > 0.0) || !(m > 0.0))
    throw std::invalid_argument("generalized_k requires k > 0 and m > 0");
  check_avg_snr(avg_snr);
  const int L = kGeneralizedKTerms;
  const QuadratureRule& rule = quad_rule(QuadKind::Laguerre, L);
  double lambda = k * m / avg_snr;
  std::vector<double> logw(L), beta(L, m), zetas(L);
  for (int l = 0; l < L; ++l) {
    double tau = rule.nodes[l];
    zetas[l] = lambda / tau;
    double logtheta = m * std::log(lambda) + std::log(rule.weights[l]) +
                      (k - m - 1.0) * std::log(tau) - std::lgamma(m) -
                      std::lgamma(k);
    logw[l] = logtheta + std::lgamma(m) - m * std::log(zetas[l]);
  }
  return finalize(std::move(logw), std::move(beta), std::move(zetas), avg_snr,
                  FadingFamily::GeneralizedK);
}

MixtureGamma from_kappa_mu(double kappa, double mu, double avg_snr) {
  if (!(kappa > 0.0) || !(mu > 0.0))
    throw std::invalid_argument("kappa_mu requires kappa > 0 and mu > 0");
  check_avg_snr(avg_snr);
  const int L = kKappaMuTerms;
  double zeta = mu * (1.0 + kappa) / avg_snr;
  std::vector<double> logw(L), beta(L), zetas(L, zeta);
  for (int l = 1; l <= L; ++l) {
    double b = mu - 1.0 + l;
    beta[l - 1] = b;
    double logtheta = (2.0 * l + mu - 2.0) * std::log(mu) +
                      (mu + l - 1.0) * std::log1p(kappa) +
                      (l - 1.0) * std::log(kappa) - mu * kappa -
                      (mu + l - 1.0) * std::log(avg_snr) - std::lgamma(b) -
                      std::lgamma(static_cast<double>(l));
    logw[l - 1] = logtheta + std::lgamma(b) - b * std::log(zeta);
  }
  return finalize(std::move(logw), std::move(beta), std::move(zetas), avg_snr,
                  FadingFamily::KappaMu);
}

MixtureGamma from_components(std::vector<MgComponent> components,
                             double avg_snr) {
  if (components.empty())
    throw std::invalid_argument("mixture needs at least one component");
  check_avg_snr(avg_snr);
  double total = 0.0;
  std::vector<double> logw(components.size()), beta(components.size()),
      zetas(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) {
    const auto& comp = components[i];
    if (!(comp.alpha > 0.0) || !(comp.beta > 0.0) || !(comp.zeta > 0.0))
      throw std::invalid_argument("mixture components must be positive");
    double w = comp.alpha * std::exp(std::lgamma(comp.beta) -
                                     comp.beta * std::log(comp.zeta));
    total += w;
    logw[i] = std::log(w);
    beta[i] = comp.beta;
    zetas[i] = comp.zeta;
  }
  if (std::abs(total - 1.0) > 1e-4)
    throw std::invalid_argument("mixture weights are not normalized");
  return finalize(std::move(logw), std::move(beta), std::move(zetas), avg_snr,
                  FadingFamily::Custom);
}

MixtureGamma load_mixture_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open mixture file: " + path);
  double avg_snr = 0.0;
  bool have_avg = false;
  std::vector<MgComponent> components;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "avg_snr") {
      if (!(ls >> avg_snr))
        throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                    ": malformed avg_snr line");
      have_avg = true;
      continue;
    }
    MgComponent comp;
    try {
      comp.alpha = std::stod(first);
    } catch (const std::exception&) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected 'avg_snr <v>' or a numeric triple");
    }
    if (!(ls >> comp.beta >> comp.zeta))
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected '<alpha> <beta> <zeta>'");
    components.push_back(comp);
  }
  if (!have_avg)
    throw std::invalid_argument(path + ": missing avg_snr line");
  return from_components(std::move(components), avg_snr);
}

double pdf(const MixtureGamma& d, double gamma) {
  if (std::isnan(gamma) || gamma < 0.0)
    throw std::invalid_argument("pdf requires gamma >= 0");
  if (gamma == 0.0) {
    double v = 0.0;
    for (std::size_t i = 0; i < d.components.size(); ++i) {
      double b = d.components[i].beta;
      if (b < 1.0) return std::numeric_limits<double>::infinity();
      if (b == 1.0)
        v += std::exp(d.log_weight[i]) * d.components[i].zeta;
    }
    return v;
  }
  double lg = std::log(gamma);
  double v = 0.0;
  for (std::size_t i = 0; i < d.components.size(); ++i) {
    double b = d.components[i].beta;
    double z = d.components[i].zeta;
    v += std::exp(d.log_weight[i] + b * std::log(z) + (b - 1.0) * lg -
                  z * gamma - std::lgamma(b));
  }
  return v;
}

double cdf(const MixtureGamma& d, double gamma) {
  if (std::isnan(gamma)) throw std::invalid_argument("cdf requires a number");
  if (gamma <= 0.0) return 0.0;
  double v = 0.0;
  for (std::size_t i = 0; i < d.components.size(); ++i) {
    v += std::exp(d.log_weight[i]) *
         gamma_p(d.components[i].beta, d.components[i].zeta * gamma);
  }
  return std::clamp(v, 0.0, 1.0);
}

double mean(const MixtureGamma& d) {
  double v = 0.0;
  for (std::size_t i = 0; i < d.components.size(); ++i) {
    v += std::exp(d.log_weight[i]) * d.components[i].beta /
         d.components[i].zeta;
  }
  return v;
}

AsymptoticExpansion asymptotic_expansion(const MixtureGamma& d) {
  if (d.family_tag == FadingFamily::Custom)
    throw std::domain_error("no asymptotic expansion for family: custom");
  double beta_min = std::numeric_limits<double>::infinity();
  for (const auto& comp : d.components) beta_min = std::min(beta_min, comp.beta);
  AsymptoticExpansion e;
  e.dominant_psi = beta_min;
  for (std::size_t i = 0; i < d.components.size(); ++i) {
    const auto& comp = d.components[i];
    if (std::abs(comp.beta - beta_min) > 1e-9) continue;
    double phi = std::exp(d.log_weight[i] +
                          comp.beta * std::log(comp.zeta * d.avg_snr) -
                          std::lgamma(comp.beta + 1.0));
    e.terms.push_back({phi, comp.beta, comp.beta});
  }
  std::sort(e.terms.begin(), e.terms.end(),
            [](const AsymptoticTerm& a, const AsymptoticTerm& b) {
              return a.psi < b.psi;
            });
  return e;
}

double sample_one(const MixtureGamma& d, Rng& rng) {
  double u = rng.uniform();
  double acc = 0.0;
  std::size_t pick = d.components.size() - 1;
  for (std::size_t i = 0; i < d.components.size(); ++i) {
    acc += std::exp(d.log_weight[i]);
    if (u <= acc) {
      pick = i;
      break;
    }
  }
  return rng.gamma(d.components[pick].beta, d.components[pick].zeta);
}

std::vector<double> sample(const MixtureGamma& d, Rng& rng, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = sample_one(d, rng);
  return out;
}

}  // namespace plsec
