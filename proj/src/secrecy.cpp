#include "plsec/secrecy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "plsec/quadrature.hpp"
#include "plsec/special.hpp"

namespace plsec {

namespace {

constexpr double kLog2E = 1.4426950408889634;

double log2m_of(const SecrecyScenario& s) {
  return std::log2(static_cast<double>(s.constellation.m));
}

void check_scenario(const SecrecyScenario& s) {
  if (s.constellation.pam_levels.empty())
    throw std::invalid_argument("scenario constellation is empty");
  if (s.main.components.empty() || s.eve.components.empty())
    throw std::invalid_argument("scenario fading models are empty");
  if (s.hermite_order < 1 || s.laguerre_order < 1 || s.legendre_order < 1)
    throw std::invalid_argument("quadrature orders must be >= 1");
}

double rate_gap(const SecrecyScenario& s, double gamma) {
  double log2m = log2m_of(s);
  return log2m - mutual_information(s.constellation, gamma, s.hermite_order);
}

// SNR where the rate has saturated to log2 M within 1e-15 bits.
double saturation_point(const SecrecyScenario& s) {
  double x = 50.0;
  while (x < 1e6 && rate_gap(s, x) > 1e-15) x *= 2.0;
  return x;
}

struct GammaNodes {
  std::vector<double> gamma;
  std::vector<double> weight;
};

// Geometric composite grid in v = sqrt(gamma) on [0, sqrt(X_sat)]: segment
// edges halve toward the origin until both fading cdfs are negligible, so
// integrable density singularities and the rate's curvature near zero are
// both resolved by fixed-order segments.
GammaNodes rate_integral_nodes(const SecrecyScenario& s, int order) {
  double vmax = std::sqrt(saturation_point(s));
  double log2m = log2m_of(s);
  int halvings = 24;
  while (halvings < 64) {
    double b = vmax * std::ldexp(1.0, -halvings);
    double mass = std::max(cdf(s.main, b * b), cdf(s.eve, b * b));
    if (mass * log2m <= 1e-13) break;
    ++halvings;
  }
  std::vector<double> edges;
  edges.push_back(0.0);
  for (int j = halvings - 1; j >= 0; --j)
    edges.push_back(vmax * std::ldexp(1.0, -j));

  const QuadratureRule& rule = quad_rule(QuadKind::Legendre, order);
  GammaNodes nodes;
  nodes.gamma.reserve((edges.size() - 1) * order);
  nodes.weight.reserve((edges.size() - 1) * order);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double mid = 0.5 * (edges[i] + edges[i + 1]);
    double half = 0.5 * (edges[i + 1] - edges[i]);
    for (int q = 0; q < order; ++q) {
      double v = mid + half * rule.nodes[q];
      nodes.gamma.push_back(v * v);
      nodes.weight.push_back(half * rule.weights[q] * 2.0 * v);
    }
  }
  return nodes;
}

struct RateIntegrals {
  double j_e = 0.0;    // E[gap(gamma_E)]
  double j_eb = 0.0;   // E[gap(gamma_E) F_B(gamma_E)]
  double j_be = 0.0;   // E[gap(gamma_B) F_E(gamma_B)]
};

RateIntegrals rate_integrals(const SecrecyScenario& s) {
  GammaNodes nodes = rate_integral_nodes(s, s.laguerre_order);
  RateIntegrals r;
  for (std::size_t i = 0; i < nodes.gamma.size(); ++i) {
    double g = nodes.gamma[i];
    double w = nodes.weight[i];
    double gap = rate_gap(s, g);
    double fb = pdf(s.main, g);
    double fe = pdf(s.eve, g);
    double cb = cdf(s.main, g);
    double ce = cdf(s.eve, g);
    r.j_e += w * gap * fe;
    r.j_eb += w * gap * fe * cb;
    r.j_be += w * gap * fb * ce;
  }
  return r;
}

// P(gamma_B <= gamma_E) for independent mixtures, via the Gamma-vs-Gamma
// closed form P(X < Y) = I_x(beta_X, beta_Y) at x = zeta_X/(zeta_X+zeta_Y).
double prob_main_below_eve(const SecrecyScenario& s) {
  double p = 0.0;
  for (std::size_t l = 0; l < s.main.components.size(); ++l) {
    const auto& cb = s.main.components[l];
    double wb = std::exp(s.main.log_weight[l]);
    for (std::size_t j = 0; j < s.eve.components.size(); ++j) {
      const auto& ce = s.eve.components[j];
      double we = std::exp(s.eve.log_weight[j]);
      p += wb * we *
           beta_inc(cb.beta, ce.beta, cb.zeta / (cb.zeta + ce.zeta));
    }
  }
  return std::clamp(p, 0.0, 1.0);
}

// Composite outage grid on [0, H]: edges graded geometrically toward both
// endpoints, where the eavesdropper density and the inverse-rate map have
// their sharp behavior.
std::vector<double> outage_edges(const SecrecyScenario& s, double h) {
  int left = 8;
  while (left < 60 && cdf(s.eve, h * std::ldexp(1.0, 1 - left)) > 1e-10)
    ++left;
  std::vector<double> edges;
  edges.push_back(0.0);
  for (int j = left; j >= 1; --j) edges.push_back(h * std::ldexp(1.0, -j));
  for (int j = 2; j <= 30; ++j)
    edges.push_back(h * (1.0 - std::ldexp(1.0, -j)));
  edges.push_back(h);
  return edges;
}

}  // namespace

AsrResult asr(const SecrecyScenario& s) {
  check_scenario(s);
  RateIntegrals r = rate_integrals(s);
  double p_be = prob_main_below_eve(s);
  AsrResult out;
  out.i_lim = r.j_e;
  out.i3 = r.j_e - kLog2E;
  out.i2 = r.j_eb - kLog2E * p_be;
  out.i1 = r.j_be - kLog2E * (1.0 - p_be);
  out.asr = std::max(r.j_e - r.j_eb - r.j_be, 0.0);
  return out;
}

double i_lim(const SecrecyScenario& s) {
  check_scenario(s);
  return rate_integrals(s).j_e;
}

SopResult sop(const SecrecyScenario& s) {
  check_scenario(s);
  double rs = s.target_rate;
  if (!(rs > 0.0)) throw std::invalid_argument("target rate must be positive");
  double log2m = log2m_of(s);
  SopResult out;
  if (rs >= log2m) {
    out.sop = 1.0;
    out.h_m = 0.0;
    out.limit_sop = 1.0;
    out.degenerate_threshold = true;
    return out;
  }
  const Constellation& c = s.constellation;
  int n = s.hermite_order;
  double h = inverse_mi(c, log2m - rs, n, 1e-10);
  out.h_m = h;
  out.limit_sop = 1.0 - cdf(s.eve, h);

  std::vector<double> edges = outage_edges(s, h);
  const QuadratureRule& rule = quad_rule(QuadKind::Legendre, s.legendre_order);
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double mid = 0.5 * (edges[i] + edges[i + 1]);
    double half = 0.5 * (edges[i + 1] - edges[i]);
    for (int q = 0; q < rule.order; ++q) {
      double y = mid + half * rule.nodes[q];
      double wy = half * rule.weights[q];
      double t = rs + mutual_information(c, y, n);
      double factor = 1.0;
      if (t < log2m - 1e-12)
        factor = cdf(s.main, inverse_mi(c, t, n, 1e-10));
      integral += wy * factor * pdf(s.eve, y);
    }
  }
  out.sop = std::clamp(out.limit_sop + integral, 0.0, 1.0);
  return out;
}

AsrAsymptote asymptotic_asr(const SecrecyScenario& s) {
  check_scenario(s);
  AsymptoticExpansion expansion = asymptotic_expansion(s.main);
  const Constellation& c = s.constellation;
  int n = s.hermite_order;

  double cut = 50.0;
  while (cut < 1e6 && mmse(c, cut, n) > 1e-12) cut *= 2.0;
  const QuadratureRule& rule = quad_rule(QuadKind::Legendre, 200);

  AsrAsymptote out;
  out.g_d = expansion.dominant_psi;
  out.i_lim = i_lim(s);
  out.theta.assign(expansion.terms.size(), 0.0);
  for (int q = 0; q < rule.order; ++q) {
    double g = 0.5 * cut * (rule.nodes[q] + 1.0);
    double w = 0.5 * cut * rule.weights[q];
    double common = w * cdf(s.eve, g) * mmse(c, g, n) * kLog2E;
    for (std::size_t l = 0; l < expansion.terms.size(); ++l)
      out.theta[l] += common * std::pow(g, expansion.terms[l].lambda);
  }
  out.g_a_asr = 0.0;
  for (std::size_t l = 0; l < expansion.terms.size(); ++l)
    out.g_a_asr += out.theta[l] * expansion.terms[l].phi;
  return out;
}

SopAsymptote asymptotic_sop(const SecrecyScenario& s) {
  check_scenario(s);
  AsymptoticExpansion expansion = asymptotic_expansion(s.main);
  double rs = s.target_rate;
  if (!(rs > 0.0)) throw std::invalid_argument("target rate must be positive");
  double log2m = log2m_of(s);

  SopAsymptote out;
  out.g_d = expansion.dominant_psi;
  if (rs >= log2m) {
    out.limit_sop = 1.0;
    out.g_a_sop = 0.0;
    return out;
  }
  const Constellation& c = s.constellation;
  int n = s.hermite_order;
  double h = inverse_mi(c, log2m - rs, n, 1e-10);
  out.limit_sop = 1.0 - cdf(s.eve, h);

  double z_cap = inverse_mi(c, log2m - 1e-12, n, 1e-10);
  std::vector<double> edges = outage_edges(s, h);
  const QuadratureRule& rule = quad_rule(QuadKind::Legendre, 60);
  out.delta.assign(expansion.terms.size(), 0.0);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double mid = 0.5 * (edges[i] + edges[i + 1]);
    double half = 0.5 * (edges[i + 1] - edges[i]);
    for (int q = 0; q < rule.order; ++q) {
      double y = mid + half * rule.nodes[q];
      double wy = half * rule.weights[q];
      double t = rs + mutual_information(c, y, n);
      double z = z_cap;
      if (t < log2m - 1e-12) z = inverse_mi(c, t, n, 1e-10);
      double common = wy * pdf(s.eve, y);
      for (std::size_t l = 0; l < expansion.terms.size(); ++l)
        out.delta[l] += common * std::pow(z, expansion.terms[l].lambda);
    }
  }
  out.g_a_sop = 0.0;
  for (std::size_t l = 0; l < expansion.terms.size(); ++l)
    out.g_a_sop += out.delta[l] * expansion.terms[l].phi;
  return out;
}

AsymptoticSecrecy asymptotic_secrecy(const SecrecyScenario& s) {
  AsrAsymptote a = asymptotic_asr(s);
  SopAsymptote b = asymptotic_sop(s);
  AsymptoticSecrecy out;
  out.g_d = a.g_d;
  out.g_a_asr = a.g_a_asr;
  out.g_a_sop = b.g_a_sop;
  out.theta = std::move(a.theta);
  out.delta = std::move(b.delta);
  return out;
}

}  // namespace plsec
