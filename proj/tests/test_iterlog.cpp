#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "hardy_rellich/errors.hpp"
#include "hardy_rellich/iterlog.hpp"

using namespace hr;

namespace {

// Independent recursion in long double.
long double x1_ld(long double t) { return 1.0L / (1.0L - std::log(t)); }
long double xk_ld(int k, long double t) {
  for (int i = 0; i < k; ++i) t = x1_ld(t);
  return t;
}

}  // namespace

TEST_CASE("first iterated logarithm at simple points") {
  CHECK(iterated_log(1, 1.0) == 1.0);
  CHECK(iterated_log(1, std::exp(-1.0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(iterated_log(1, std::exp(-3.0)) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("composed iterated logarithms") {
  CHECK(iterated_log(2, 1.0) == 1.0);
  CHECK(iterated_log(2, std::exp(-1.0)) == doctest::Approx(1.0 / (1.0 + std::log(2.0))).epsilon(1e-15));
  CHECK(iterated_log(2, std::exp(-1.0)) == doctest::Approx(0.590616).epsilon(1e-6));
  CHECK(iterated_log(3, std::exp(-1.0)) == doctest::Approx(static_cast<double>(xk_ld(3, std::exp(-1.0L)))).epsilon(1e-14));
}

TEST_CASE("iterated logarithm rejects arguments outside (0, 1]") {
  CHECK_THROWS_AS(iterated_log(1, 0.0), DomainError);
  CHECK_THROWS_AS(iterated_log(1, -0.5), DomainError);
  CHECK_THROWS_AS(iterated_log(1, 1.5), DomainError);
  CHECK_THROWS_AS(iterated_log(0, 0.5), DomainError);
  CHECK_THROWS_AS(xk_power_derivative(1, 1.0, 0.0), DomainError);
}

TEST_CASE("log-argument variant agrees and reaches below the smallest double") {
  Gen g(11);
  for (int i = 0; i < kPropertyTrials; ++i) {
    const int k = g.integer(1, 5);
    const double t = g.log_uniform(1e-300, 1.0);
    CHECK(iterated_log_from_log(k, std::log(t)) == doctest::Approx(iterated_log(k, t)).epsilon(1e-13));
  }
  CHECK(iterated_log_from_log(1, -1e6) == doctest::Approx(1.0 / (1.0 + 1e6)).epsilon(1e-15));
}

TEST_CASE("power derivative examples") {
  const double t = std::exp(-1.0);
  CHECK(xk_power_derivative(1, 1.0, t) == doctest::Approx(std::exp(1.0) * 0.25).epsilon(1e-14));
  CHECK(xk_power_derivative(1, 2.0, t) == doctest::Approx(2.0 * std::exp(1.0) * 0.125).epsilon(1e-14));
  const double x2 = 1.0 / (1.0 + std::log(2.0));
  CHECK(xk_power_derivative(2, 1.0, t) == doctest::Approx(std::exp(1.0) * 0.5 * x2 * x2).epsilon(1e-14));
}

TEST_CASE("property: values lie in (0, 1], equal 1 only at t = 1, and increase in t") {
  Gen g(12);
  for (int i = 0; i < kPropertyTrials; ++i) {
    const int k = g.integer(1, 6);
    double a = g.uniform(1e-12, 1.0), b = g.uniform(1e-12, 1.0);
    if (a > b) std::swap(a, b);
    const double xa = iterated_log(k, a), xb = iterated_log(k, b);
    CHECK(xa > 0.0);
    CHECK(xb < 1.0);
    if (a < b) CHECK(xa < xb);
  }
  for (int k = 1; k <= 6; ++k) CHECK(iterated_log(k, 1.0) == 1.0);
}

TEST_CASE("property: recursion X_k = X_1(X_{k-1})") {
  Gen g(13);
  for (int i = 0; i < kPropertyTrials; ++i) {
    const int k = g.integer(2, 6);
    const double t = g.log_uniform(1e-200, 1.0);
    CHECK(iterated_log(k, t) == doctest::Approx(iterated_log(1, iterated_log(k - 1, t))).epsilon(1e-15));
  }
}

TEST_CASE("property: power derivative matches central differences") {
  Gen g(14);
  for (int i = 0; i < kPropertyTrials; ++i) {
    const int k = g.integer(1, 4);
    const double beta = g.uniform(-3.0, 3.0);
    if (std::abs(beta + 1.0) < 0.05) continue;
    const double t = g.uniform(0.05, 0.95), h = 1e-6;
    const double fd = (std::pow(iterated_log(k, t + h), beta) - std::pow(iterated_log(k, t - h), beta)) / (2.0 * h);
    CHECK(xk_power_derivative(k, beta, t) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("series weights are products of squares, also in the log domain") {
  Gen g(15);
  for (int n = 0; n < kPropertyTrials; ++n) {
    const double t = g.log_uniform(1e-100, 0.999);
    const int i = g.integer(0, 6);
    double prod = 1.0;
    for (int j = 1; j <= i; ++j) prod *= std::pow(iterated_log(j, t), 2);
    CHECK(series_weight(i, std::log(t)) == doctest::Approx(prod).epsilon(1e-13));
    CHECK(log_series_weight(i, std::log(t)) == doctest::Approx(std::log(prod)).epsilon(1e-12));
  }
  // exp of the log weight underflows here, the log weight does not.
  CHECK(std::isfinite(log_series_weight(3, -1e300)));
}

namespace {

// Direct summation; the terms decay like i^{-4}, so 10^6 terms leave a
// remainder far below double precision of the sum.
double brute_series(double t) {
  long double sum = 0.0L, prod = 1.0L, x = t;
  for (int i = 1; i <= 1000000; ++i) {
    x = x1_ld(x);
    prod *= x * x;
    sum += prod;
  }
  return static_cast<double>(sum);
}

}  // namespace

TEST_CASE("log series against brute-force summation") {
  const double t = std::exp(-1.0), exact = brute_series(t);
  // The default cap of 64 terms stops short of 1e-12 and says so.
  const SeriesResult capped = log_series(t, 64, 1e-12);
  CHECK_FALSE(capped.converged);
  CHECK(capped.value > 0.25 + 0.25 * 0.590616 * 0.590616);
  CHECK(exact - capped.value >= 0.0);
  CHECK(exact - capped.value <= capped.tail_bound);
  const SeriesResult full = log_series(t, 200000, 1e-12);
  CHECK(full.converged);
  CHECK(full.value == doctest::Approx(exact).epsilon(2e-12));
}

TEST_CASE("log series diverges at t = 1 and vanishes as t -> 0") {
  CHECK_THROWS_AS(log_series(1.0), DivergenceError);
  CHECK_THROWS_AS(log_series(0.0), DomainError);
  const double a = log_series(1e-10).value, b = log_series(1e-100).value, c = log_series(1e-300).value;
  CHECK(a > b);
  CHECK(b > c);
  CHECK(c < 1e-5);
}

TEST_CASE("property: the tail bound covers the true remainder") {
  Gen g(16);
  for (int n = 0; n < 10; ++n) {
    const double t = g.uniform(1e-6, 0.9);
    const int terms = g.integer(1, 64);
    const SeriesResult r = log_series(t, terms, 1e-14);
    const double exact = brute_series(t);
    CHECK(exact - r.value <= r.tail_bound * (1.0 + 1e-9) + 1e-14 * exact);
  }
}
