#pragma once

// Iterated logarithms X_1(t) = 1/(1 - ln t), X_k = X_1(X_{k-1}) on (0, 1].
//
// Every routine has a variant taking ln t instead of t so that points
// far below the smallest positive double stay representable.

namespace hr {

double iterated_log(int k, double t);
double iterated_log_from_log(int k, double log_t);

// d/dt X_k(t)^beta = (beta / t) X_1 ... X_{k-1} X_k^{1+beta}.
double xk_power_derivative(int k, double beta, double t);

// Product X_1^2 ... X_i^2 at ln t; equals 1 for i == 0.
double series_weight(int i, double log_t);
// Its logarithm, which stays finite where the product itself underflows.
double log_series_weight(int i, double log_t);

// Product X_1^{b_1} ... X_n^{b_n} at ln t, evaluated in the log domain.
double log_power_product(const double* betas, int n, double log_t);

struct SeriesResult {
  double value = 0.0;
  // Rigorous upper bound on the omitted tail.
  double tail_bound = 0.0;
  int terms = 0;
  bool converged = false;
};

// Sum over i >= 1 of X_1^2 ... X_i^2, truncated once the tail bound drops
// below tol * value or after max_terms terms. Diverges at t = 1.
SeriesResult log_series(double t, int max_terms = 64, double tol = 1e-15);

}  // namespace hr
