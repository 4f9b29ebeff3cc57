#include "plsec/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace plsec {

namespace {

constexpr int kMaxOrder = 256;

// Golub-Welsch nodes: eigenvalues of the symmetric tridiagonal Jacobi
// matrix of the orthogonal-polynomial recurrence. Weights come from the
// Christoffel function, w = 1 / sum_j p_j(x)^2 over the orthonormal
// polynomials; eigenvector first components lose all accuracy once the
// true weight drops below about mu0 * eps^2, the recurrence does not.
QuadratureRule build_rule(QuadKind kind, int order) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub = Eigen::VectorXd::Zero(order > 1 ? order - 1 : 1);
  double mu0 = 0.0;
  switch (kind) {
    case QuadKind::Hermite:
      mu0 = std::sqrt(M_PI);
      for (int i = 1; i < order; ++i) sub[i - 1] = std::sqrt(i / 2.0);
      break;
    case QuadKind::Laguerre:
      mu0 = 1.0;
      for (int i = 0; i < order; ++i) diag[i] = 2.0 * i + 1.0;
      for (int i = 1; i < order; ++i) sub[i - 1] = static_cast<double>(i);
      break;
    case QuadKind::Legendre:
      mu0 = 2.0;
      for (int i = 1; i < order; ++i)
        sub[i - 1] = i / std::sqrt(4.0 * i * i - 1.0);
      break;
  }

  QuadratureRule rule{kind, order, std::vector<double>(order),
                      std::vector<double>(order)};
  if (order == 1) {
    rule.nodes[0] = diag[0];
    rule.weights[0] = mu0;
    return rule;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub.head(order - 1),
                                Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("quadrature eigensolve failed");

  for (int i = 0; i < order; ++i) {
    double x = solver.eigenvalues()[i];
    rule.nodes[i] = x;
    double prev = 0.0;
    double p = 1.0 / std::sqrt(mu0);
    double sum = p * p;
    for (int j = 0; j + 1 < order; ++j) {
      double next =
          ((x - diag[j]) * p - (j > 0 ? sub[j - 1] : 0.0) * prev) / sub[j];
      prev = p;
      p = next;
      sum += p * p;
    }
    // The sum overflows exactly when the true weight underflows (large
    // Laguerre orders); keep the weight positive so logarithms stay finite.
    double w = std::isfinite(sum) ? 1.0 / sum : 0.0;
    rule.weights[i] = std::max(w, std::numeric_limits<double>::min());
  }

  if (kind == QuadKind::Hermite || kind == QuadKind::Legendre) {
    // Enforce the exact symmetry of the rule.
    for (int i = 0, j = order - 1; i < j; ++i, --j) {
      double x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
      rule.nodes[i] = -x;
      rule.nodes[j] = x;
      double w = 0.5 * (rule.weights[i] + rule.weights[j]);
      rule.weights[i] = w;
      rule.weights[j] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  }
  return rule;
}

std::map<std::pair<int, int>, QuadratureRule>& rule_cache() {
  static std::map<std::pair<int, int>, QuadratureRule> cache;
  return cache;
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

const QuadratureRule& quad_rule(QuadKind kind, int order) {
  if (order < 1 || order > kMaxOrder)
    throw std::invalid_argument("quadrature order must be in [1, 256]");
  std::lock_guard<std::mutex> lock(cache_mutex());
  auto key = std::make_pair(static_cast<int>(kind), order);
  auto it = rule_cache().find(key);
  if (it == rule_cache().end())
    it = rule_cache().emplace(key, build_rule(kind, order)).first;
  return it->second;
}

QuadratureRule make_rule(QuadKind kind, int order) {
  return quad_rule(kind, order);
}

}  // namespace plsec
