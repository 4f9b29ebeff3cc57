#pragma once

namespace plsec {

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a), a > 0.
double gamma_p(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1].
double beta_inc(double a, double b, double x);

}  // namespace plsec
