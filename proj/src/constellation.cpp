#include "plsec/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "plsec/quadrature.hpp"

namespace plsec {

namespace {

constexpr double kLog2E = 1.4426950408889634;

// The rate integrand against exp(-t^2) is analytic except for complex
// singularities sitting above the crossing points of the nearest-level map.
// Splitting the axis at those crossings keeps every singularity on a panel
// edge, so fixed-order Legendre panels converge geometrically; a single
// global rule over the window does not.
constexpr double kTWindow = 8.5;
constexpr double kPanelCap = 3.0;
constexpr double kExpWindow = 45.0;

struct PanelGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Builds the panel grid for one reference level given the offsets
// a_k = sqrt(gamma) * (p_j - p_k) in descending order.
void build_panels(const std::vector<double>& a_desc, int n, PanelGrid& grid) {
  const QuadratureRule& rule = quad_rule(QuadKind::Legendre, n);
  thread_local std::vector<double> edges;
  edges.clear();
  edges.push_back(-kTWindow);
  for (std::size_t i = 0; i + 1 < a_desc.size(); ++i) {
    double mid = -0.5 * (a_desc[i] + a_desc[i + 1]);
    if (mid > -kTWindow && mid < kTWindow &&
        (edges.back() < mid - 1e-12)) {
      edges.push_back(mid);
    }
  }
  edges.push_back(kTWindow);

  grid.nodes.clear();
  grid.weights.clear();
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    double lo = edges[i];
    double hi = edges[i + 1];
    int parts = std::max(1, static_cast<int>(std::ceil((hi - lo) / kPanelCap)));
    double step = (hi - lo) / parts;
    for (int s = 0; s < parts; ++s) {
      double mid = lo + (s + 0.5) * step;
      double half = 0.5 * step;
      for (int q = 0; q < n; ++q) {
        grid.nodes.push_back(mid + half * rule.nodes[q]);
        grid.weights.push_back(half * rule.weights[q]);
      }
    }
  }
}

void check_args(const Constellation& c, double gamma, int n) {
  if (c.pam_levels.empty()) throw std::invalid_argument("empty constellation");
  if (!(gamma >= 0.0) || std::isinf(gamma))
    throw std::invalid_argument("snr must be finite and nonnegative");
  if (n < 1) throw std::invalid_argument("quadrature order must be >= 1");
}

// log2 M - I_M(gamma): every panel-node contribution is nonnegative, so the
// total carries no cancellation and vanishes identically once the level
// offsets leave the integration window.
double rate_gap(const Constellation& c, double gamma, int n) {
  const auto& p = c.pam_levels;
  const int r = static_cast<int>(p.size());
  const double s = std::sqrt(gamma);
  thread_local PanelGrid grid;
  thread_local std::vector<double> a;
  a.resize(r);

  double total = 0.0;
  for (int j = 0; j < r; ++j) {
    for (int k = 0; k < r; ++k) a[k] = s * (p[j] - p[k]);  // descending in k
    build_panels(a, n, grid);
    for (std::size_t q = 0; q < grid.nodes.size(); ++q) {
      double t = grid.nodes[q];
      double emax = 0.0;
      for (int k = 0; k < r; ++k) {
        double e = -a[k] * (2.0 * t + a[k]);
        if (e > emax) emax = e;
      }
      double sum = 0.0;
      for (int k = 0; k < r; ++k) {
        double e = -a[k] * (2.0 * t + a[k]) - emax;
        if (e > -kExpWindow) sum += std::exp(e);
      }
      total += grid.weights[q] * std::exp(-t * t) *
               (emax + std::log(sum)) * kLog2E;
    }
  }
  return total * 2.0 / (r * std::sqrt(M_PI));
}

}  // namespace

Constellation make_constellation(int m) {
  if (m != 4 && m != 16 && m != 64 && m != 256)
    throw std::invalid_argument("modulation order must be 4, 16, 64, or 256");
  int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
  double d = std::sqrt(3.0 / (2.0 * (m - 1)));
  Constellation c;
  c.m = m;
  c.pam_levels.resize(r);
  for (int j = 0; j < r; ++j) c.pam_levels[j] = (2.0 * j - (r - 1)) * d;
  c.symbols.reserve(m);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      c.symbols.emplace_back(c.pam_levels[i], c.pam_levels[j]);
  return c;
}

double l_function(const Constellation& c, double gamma, int n) {
  check_args(c, gamma, n);
  return rate_gap(c, gamma, n) - kLog2E;
}

double mutual_information(const Constellation& c, double gamma, int n) {
  check_args(c, gamma, n);
  double log2m = std::log2(static_cast<double>(c.m));
  return std::clamp(log2m - rate_gap(c, gamma, n), 0.0, log2m);
}

MiEvaluation evaluate_mi(const Constellation& c, double gamma, int n) {
  MiEvaluation e;
  e.gamma = gamma;
  e.hermite_order = n;
  e.l_value = l_function(c, gamma, n);
  e.mi = mutual_information(c, gamma, n);
  return e;
}

double mmse(const Constellation& c, double gamma, int n) {
  check_args(c, gamma, n);
  const auto& p = c.pam_levels;
  const int r = static_cast<int>(p.size());
  const double s = std::sqrt(gamma);
  thread_local PanelGrid grid;
  thread_local std::vector<double> a;
  a.resize(r);

  double total = 0.0;
  for (int j = 0; j < r; ++j) {
    for (int k = 0; k < r; ++k) a[k] = s * (p[j] - p[k]);
    build_panels(a, n, grid);
    for (std::size_t q = 0; q < grid.nodes.size(); ++q) {
      double t = grid.nodes[q];
      double emax = 0.0;
      for (int k = 0; k < r; ++k) {
        double e = -a[k] * (2.0 * t + a[k]);
        if (e > emax) emax = e;
      }
      double wsum = 0.0;
      double psum = 0.0;
      for (int k = 0; k < r; ++k) {
        double e = -a[k] * (2.0 * t + a[k]) - emax;
        if (e > -kExpWindow) {
          double w = std::exp(e);
          wsum += w;
          psum += w * p[k];
        }
      }
      double diff = p[j] - psum / wsum;
      total += grid.weights[q] * std::exp(-t * t) * diff * diff;
    }
  }
  return std::clamp(total * 2.0 / (r * std::sqrt(M_PI)), 0.0, 1.0);
}

double inverse_mi(const Constellation& c, double target, int n, double tol) {
  check_args(c, 0.0, n);
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (std::isnan(target) || target < 0.0)
    throw std::invalid_argument("rate target must be nonnegative");
  double log2m = std::log2(static_cast<double>(c.m));
  if (target >= log2m)
    throw std::domain_error("rate target must be below log2(M)");
  if (target == 0.0) return 0.0;

  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 1100 && mutual_information(c, hi, n) < target; ++i) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    double im = mutual_information(c, mid, n);
    if (std::abs(im - target) <= tol) return mid;
    if (im < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace plsec
