#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "hardy_rellich/constants.hpp"
#include "hardy_rellich/errors.hpp"

using namespace hr;

namespace {

// Mode candidate written out independently of the library.
double candidate(int k, int N, double m) {
  const double c = k * (k + N - 2.0);
  const double q = N - 4.0 - 2.0 * m;
  const double num = q * (N + 2.0 * m) / 4.0 + c;
  return num * num / (q * q / 4.0 + c);
}

double brute_min(int N, double m, int kmax, int* arg = nullptr) {
  double best = INFINITY;
  for (int k = 0; k <= kmax; ++k)
    if (candidate(k, N, m) < best) {
      best = candidate(k, N, m);
      if (arg) *arg = k;
    }
  return best;
}

// J_0 by its power series, accurate for small arguments.
double bessel_j0(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= -(x * x / 4.0) / (static_cast<double>(k) * k);
    sum += term;
  }
  return sum;
}

}  // namespace

TEST_CASE("classical constants") {
  CHECK(hardy_constant(3) == 0.25);
  CHECK(hardy_constant(4) == 1.0);
  CHECK(hardy_constant(6) == 4.0);
  CHECK(rellich_constant(5) == 1.5625);
  CHECK(rellich_constant(6) == 9.0);
  CHECK(rellich_constant(8) == 64.0);
  CHECK(gradient_rellich_constant(5) == 6.25);
  CHECK(gradient_rellich_constant(6) == 9.0);
  CHECK(gradient_rellich_constant(30) == 225.0);
  CHECK_THROWS_AS(hardy_constant(2), DomainError);
  CHECK_THROWS_AS(rellich_constant(4), DomainError);
}

TEST_CASE("weighted Rellich constants") {
  for (int N = 5; N <= 40; ++N) {
    CHECK(sigma(0.0, N) == rellich_constant(N));
    CHECK(sigma_bar(0.0, N) == 1.0 + N * (N - 4.0) / 8.0);
  }
  CHECK(sigma_bar(0.0, 6) == 2.5);
  CHECK_THROWS_AS(sigma(1.0, 6), DomainError);
}

TEST_CASE("per-mode quotients") {
  for (int N = 5; N <= 30; ++N) CHECK(mode_quotient(0, N, 0.0) == doctest::Approx(N * N / 4.0).epsilon(1e-15));
  CHECK(mode_quotient(0, 30, 8.0) == 529.0);
  CHECK(mode_quotient(1, 30, 8.0) == 384.0);
  CHECK(mode_quotient(2, 30, 8.0) == doctest::Approx(30625.0 / 85.0).epsilon(1e-15));
  CHECK(mode_quotient(3, 30, 8.0) == doctest::Approx(43264.0 / 118.0).epsilon(1e-15));
  CHECK(mode_quotient(1, 5, 0.0) == doctest::Approx((21.0 / 4.0) * (21.0 / 4.0) / (17.0 / 4.0)).epsilon(1e-15));
  CHECK_THROWS_AS(mode_quotient(-1, 6, 0.0), DomainError);
}

TEST_CASE("a_mn examples") {
  const ConstantReport a = a_mn(30, 8.0);
  CHECK(a.value == doctest::Approx(360.2941176470588).epsilon(1e-12));
  CHECK(a.argmin_k == 2);
  REQUIRE(a.exact);
  CHECK(*a.exact == make_rational(30625, 85));
  const ConstantReport b = a_mn(5, 0.0);
  CHECK(b.value == 6.25);
  CHECK(b.argmin_k == 0);
  const ConstantReport c = a_mn(30, 4.0);
  int arg = -1;
  CHECK(c.value == brute_min(30, 4.0, 20, &arg));
  CHECK(c.value == 361.0);
  CHECK(c.argmin_k == arg);
  CHECK(c.branch.find("m <= m*") != std::string::npos);
  CHECK_THROWS_AS(a_mn(30, 13.0), DomainError);
  CHECK_THROWS_AS(a_mn(4, 0.0), DomainError);
  CHECK_THROWS_AS(a_mn(30, -0.1), DomainError);
}

TEST_CASE("thresholds at N = 30") {
  CHECK(m_star(30) == doctest::Approx(4.1709).epsilon(2e-4));
  CHECK(*m1k(30, 1) == doctest::Approx(4.853).epsilon(1e-3));
  CHECK(*m1k(30, 2) == doctest::Approx(7.0).epsilon(1e-15));
  CHECK(*m2k(30, 2) == doctest::Approx(29.0 / 3.0).epsilon(1e-15));
  CHECK(*m2k(30, 1) == doctest::Approx(11.813).epsilon(1e-3));
  CHECK(*threshold_exact(30, 2, false) == make_rational(7, 1));
  CHECK(*threshold_exact(30, 2, true) == make_rational(29, 3));
  CHECK(x0(30, 8.0) == 65.0);
  CHECK(k_bar(30) == 2);
  // (N-2)^2 - 12 c_3 = 784 - 1116 < 0: no thresholds for k = 3.
  CHECK_FALSE(m1k(30, 3));
  CHECK_FALSE(m2k(30, 3));
}

TEST_CASE("reduction constant") {
  CHECK(reduction_constant_A(6, 0.0) == 10.0);
  CHECK(reduction_constant_A(5, 0.0) == 6.5);
  CHECK(reduction_constant_A(30, 8.0) == 259.0);
}

TEST_CASE("property: sigma_bar is a quarter of the reduction constant on the small-m branch") {
  Gen g(21);
  for (int i = 0; i < kPropertyTrials; ++i) {
    const int N = g.integer(5, 60);
    const double edge = std::min((-2.0 + std::sqrt(N - 1.0)) / 2.0, 0.5 * (N - 4.0) - 1e-9);
    if (edge < 0.0) continue;
    const double m = g.uniform(0.0, edge);
    CHECK(sigma_bar(m, N) == doctest::Approx(reduction_constant_A(N, m) / 4.0).epsilon(1e-13));
  }
}

TEST_CASE("comparison constants") {
  const double n6[] = {10.0, 0.625, 1.0, 32.0, 0.0625, 9.0};
  for (int i = 0; i < kComparisonCount; ++i)
    CHECK(comparison_constant(static_cast<Comparison>(i), 6) == doctest::Approx(n6[i]).epsilon(1e-15));
  CHECK(comparison_constant(Comparison::GradientRellichOverVGradient, 5) == 0.25);
  CHECK(comparison_constant(Comparison::VLaplacianOverRadialExcess, 8) == 72.0);
  CHECK(*comparison_constant_exact(Comparison::RellichOverVLaplacian, 6) == make_rational(5, 8));
}

TEST_CASE("first zero of J_0") {
  const double z = bv_constant();
  CHECK(z > 2.40);
  CHECK(z < 2.41);
  CHECK(std::abs(bessel_j0(z)) < 1e-12);
}

TEST_CASE("higher order coefficients") {
  for (int N : {9, 12, 30}) {
    const auto e = higher_order_coefficients(N, 1, 0, HigherOrderVariant::Laplacian);
    REQUIRE(e.terms.size() == 2);
    CHECK(e.terms[0].coefficient == rellich_constant(N));
    CHECK_FALSE(e.terms[0].series);
    CHECK(e.terms[1].coefficient == 1.0 + N * (N - 4.0) / 8.0);
    CHECK(e.terms[1].series);
  }
  const auto two = higher_order_coefficients(12, 2, 1, HigherOrderVariant::Laplacian);
  CHECK(two.terms[0].coefficient == doctest::Approx(sigma(0.0, 12) * sigma(2.0, 12)).epsilon(1e-15));
  CHECK(two.terms[0].weight_power == 8.0);
  const auto mixed = higher_order_coefficients(12, 1, 1, HigherOrderVariant::Mixed);
  CHECK(mixed.terms[0].coefficient == rellich_constant(12));
  CHECK_THROWS_AS(higher_order_coefficients(8, 2, 1, HigherOrderVariant::Laplacian), DomainError);
  CHECK_THROWS_AS(higher_order_coefficients(12, 2, 2, HigherOrderVariant::Laplacian), DomainError);
  CHECK_THROWS_AS(higher_order_coefficients(12, 1, 2, HigherOrderVariant::Mixed), DomainError);
}

TEST_CASE("property: a_mn is the minimum over modes with the stated branches") {
  Gen g(22);
  for (int i = 0; i < kPropertyTrials; ++i) {
    const int N = g.integer(5, 60);
    const double m = g.uniform(0.0, 0.5 * (N - 4.0) - 1e-6);
    const ConstantReport r = a_mn(N, m);
    for (int k = 0; k <= 3 * std::max(1, k_bar(N)); ++k) CHECK(r.value <= candidate(k, N, m) * (1.0 + 1e-14));
    CHECK(r.value == doctest::Approx(brute_min(N, m, 3 * k_bar(N) + 5)).epsilon(1e-14));
    const double radial = std::pow(0.5 * (N + 2.0 * m), 2);
    if (m <= m_star(N))
      CHECK(r.value == doctest::Approx(radial).epsilon(1e-13));
    else
      CHECK(r.value < radial);
  }
  for (int N = 5; N <= 60; ++N) CHECK(a_mn(N, 0.0).value == doctest::Approx(N * N / 4.0).epsilon(1e-15));
}

TEST_CASE("property: a_mn is continuous across every threshold") {
  for (int N = 5; N <= 60; ++N) {
    std::vector<double> ts = {m_star(N)};
    for (int k = 1; k <= k_bar(N); ++k) {
      if (auto t = m1k(N, k)) ts.push_back(*t);
      if (auto t = m2k(N, k)) ts.push_back(*t);
    }
    for (double t : ts) {
      const double d = 1e-11;
      if (t - d < 0.0 || t + d >= 0.5 * (N - 4.0)) continue;
      CHECK(a_mn(N, t - d).value == doctest::Approx(a_mn(N, t + d).value).epsilon(1e-9));
    }
  }
}
