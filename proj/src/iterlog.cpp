#include "hardy_rellich/iterlog.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "hardy_rellich/errors.hpp"

namespace hr {

namespace {

void check_order(int k) {
  if (k < 1) throw DomainError("iterated_log: order must be >= 1, got " + std::to_string(k));
}

void check_log_point(double log_t) {
  if (!(log_t <= 0.0) || std::isinf(log_t))
    throw DomainError("iterated_log: argument must lie in (0, 1]");
}

}  // namespace

double iterated_log_from_log(int k, double log_t) {
  check_order(k);
  check_log_point(log_t);
  double x = 1.0 / (1.0 - log_t);
  for (int j = 2; j <= k; ++j) x = 1.0 / (1.0 - std::log(x));
  return x;
}

double iterated_log(int k, double t) {
  if (!(t > 0.0) || t > 1.0) throw DomainError("iterated_log: t must lie in (0, 1]");
  return iterated_log_from_log(k, std::log(t));
}

double xk_power_derivative(int k, double beta, double t) {
  if (!(t > 0.0) || t > 1.0) throw DomainError("xk_power_derivative: t must lie in (0, 1]");
  check_order(k);
  const double log_t = std::log(t);
  double prefix = 1.0;
  double x = 1.0 / (1.0 - log_t);
  for (int j = 2; j <= k; ++j) {
    prefix *= x;
    x = 1.0 / (1.0 - std::log(x));
  }
  return beta / t * prefix * std::pow(x, 1.0 + beta);
}

double series_weight(int i, double log_t) {
  if (i < 0) throw DomainError("series_weight: index must be >= 0");
  if (i == 0) return 1.0;
  check_log_point(log_t);
  double x = 1.0 / (1.0 - log_t);
  double w = x * x;
  for (int j = 2; j <= i; ++j) {
    x = 1.0 / (1.0 - std::log(x));
    w *= x * x;
  }
  return w;
}

double log_series_weight(int i, double log_t) {
  if (i < 0) throw DomainError("log_series_weight: index must be >= 0");
  if (i == 0) return 0.0;
  check_log_point(log_t);
  double log_x = -std::log1p(-log_t);
  double acc = 2.0 * log_x;
  for (int j = 2; j <= i; ++j) {
    log_x = -std::log1p(-log_x);
    acc += 2.0 * log_x;
  }
  return acc;
}

double log_power_product(const double* betas, int n, double log_t) {
  if (n == 0) return 1.0;
  check_log_point(log_t);
  // ln X_1 = -log1p(-ln t), ln X_{j+1} = -log1p(-ln X_j).
  double acc = 0.0;
  double log_x = -std::log1p(-log_t);
  for (int j = 0; j < n; ++j) {
    if (j > 0) log_x = -std::log1p(-log_x);
    acc += betas[j] * log_x;
  }
  return std::exp(acc);
}

SeriesResult log_series(double t, int max_terms, double tol) {
  if (!(t > 0.0) || t > 1.0) throw DomainError("log_series: t must lie in (0, 1]");
  if (t == 1.0) throw DivergenceError("log_series: every term equals 1 at t = 1");
  if (max_terms < 1) throw DomainError("log_series: max_terms must be >= 1");

  SeriesResult out;
  double x = 1.0 / (1.0 - std::log(t));
  double term = 1.0;
  for (int i = 1; i <= max_terms; ++i) {
    if (i > 1) x = 1.0 / (1.0 - std::log(x));
    term *= x * x;
    out.value += term;
    out.terms = i;
    // 1 - X_{j+1} >= d / (1 + d) with d = 1 - X_j, so the factors beyond
    // index i telescope against M = 1 / (1 - X_i).
    const double m = 1.0 / (1.0 - x);
    const double m1 = m + 1.0;
    out.tail_bound = term * m * m * (1.0 / m1 + 1.0 / (m1 * m1));
    if (out.tail_bound <= tol * out.value) {
      out.converged = true;
      break;
    }
  }
  return out;
}

}  // namespace hr
