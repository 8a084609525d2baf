#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "hardy_rellich/errors.hpp"
#include "hardy_rellich/iterlog.hpp"
#include "hardy_rellich/quadrature.hpp"

using namespace hr;

namespace {

double X1(double r) { return 1.0 / (1.0 - std::log(r)); }

QuadratureResult on_unit(const std::function<double(double)>& f, double p) {
  return integrate(f, 0.0, 1.0, QuadratureSpec{}, p);
}

double X1_t(double t) { return 1.0 / (1.0 - t); }

QuadratureResult on_unit_log(const std::function<double(double)>& h, double p) {
  return integrate_log_density([&h](const RadialPoint& x) { return h(x.t); }, 0.0, 1.0, QuadratureSpec{}, p);
}

}  // namespace

TEST_CASE("golden singular integrals") {
  // Densities with respect to dt = dr / r, t = ln r, so depth is not limited by r underflowing.
  for (double eps : {0.5, 0.05, 0.005}) {
    const auto r = on_unit_log([eps](double t) { return std::exp(2.0 * eps * t); }, -1.0 + 2.0 * eps);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0 / (2.0 * eps)).epsilon(1e-10));
  }
  const auto a = on_unit_log([](double t) { return std::pow(X1_t(t), 2.0); }, -1.0);
  CHECK(a.value == doctest::Approx(1.0).epsilon(1e-10));
  for (double al : {1.0, 0.1}) {
    const auto r = on_unit_log([al](double t) { return std::pow(X1_t(t), 1.0 + al); }, -1.0);
    CHECK(r.value == doctest::Approx(1.0 / al).epsilon(1e-10));
  }
}

TEST_CASE("plain radial integrands report the underflow limit instead of returning garbage") {
  // e^{-0.01 s} still matters where r = e^{-s} has underflowed.
  const auto r = on_unit([](double x) { return std::pow(x, -0.99); }, -0.99);
  CHECK_FALSE(r.converged);
  CHECK(std::isfinite(r.value));
  CHECK(r.value < 100.0);
  const auto ok = on_unit([](double x) { return std::pow(x, -0.9); }, -0.9);
  CHECK(ok.converged);
  CHECK(ok.value == doctest::Approx(10.0).epsilon(1e-10));
}

TEST_CASE("error estimates are honest on the golden cases") {
  struct Case {
    std::function<double(double)> h;
    double p, exact;
  };
  const Case cases[] = {
      {[](double t) { return std::exp(0.1 * t); }, -0.9, 10.0},
      {[](double t) { return X1_t(t) * X1_t(t); }, -1.0, 1.0},
      {[](double t) { return std::pow(X1_t(t), 1.1); }, -1.0, 10.0},
      {[](double t) { return std::exp(t + std::exp(t)); }, 0.0, std::exp(1.0) - 1.0},
  };
  for (const auto& c : cases) {
    const auto r = on_unit_log(c.h, c.p);
    CHECK(r.converged);
    CHECK(r.error_estimate <= std::max(QuadratureSpec{}.abs_tol, QuadratureSpec{}.rel_tol * std::abs(r.value)));
    CHECK(std::abs(r.value - c.exact) <= 3.0 * r.error_estimate + 4e-16 * c.exact);
  }
}

TEST_CASE("plain and log-substituted rules agree on regular integrands") {
  Gen g(31);
  for (int i = 0; i < 50; ++i) {
    const double a = g.uniform(0.0, 4.0), b = g.uniform(-3.0, 3.0);
    auto f = [a, b](double x) { return std::pow(x, a) * std::cos(b * x); };
    QuadratureSpec plain, log;
    log.origin_substitution = OriginSubstitution::Log;
    const auto r1 = integrate(f, 0.0, 1.0, plain), r2 = integrate(f, 0.0, 1.0, log);
    CHECK(std::abs(r1.value - r2.value) <= std::max(r1.error_estimate + r2.error_estimate, 1e-13 * std::abs(r1.value)));
  }
}

TEST_CASE("non-convergence is reported, not hidden") {
  QuadratureSpec s;
  s.max_subdivisions = 2;
  const auto r = integrate([](double x) { return std::sin(1.0 / x); }, 1e-4, 1.0, s);
  CHECK_FALSE(r.converged);
  CHECK_THROWS_AS(integrate([](double) { return 1.0; }, 1.0, 0.5, s), DomainError);
}

TEST_CASE("integrals to infinity") {
  const auto r = integrate_to_infinity([](double s) { return std::exp(-s); }, 0.0, QuadratureSpec{});
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
  const auto q = integrate_to_infinity([](double s) { return 1.0 / ((1.0 + s) * (1.0 + s)); }, 0.0, QuadratureSpec{});
  CHECK(q.value == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("log-density integrals reach deep below the smallest double") {
  // int_0^1 r^{2 eps} dt over t = ln r equals 1/(2 eps).
  const double eps = 1e-6;
  const auto r = integrate_log_density([eps](const RadialPoint& p) { return std::exp(2.0 * eps * p.t); }, 0.0, 1.0,
                                       QuadratureSpec{}, -1.0 + 2.0 * eps);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(1.0 / (2.0 * eps)).epsilon(1e-9));
}

TEST_CASE("log-weighted integrals") {
  const double eps = 0.01, a = 0.1;
  const double betas[] = {1.0 + a};
  const auto w = integrate_logweighted(-1.0 + 2.0 * eps, betas, [](double) { return 1.0; }, QuadratureSpec{});
  const auto d = on_unit_log([&](double t) { return std::exp(2.0 * eps * t) * std::pow(X1_t(t), 1.0 + a); }, -1.0 + 2.0 * eps);
  CHECK(w.value == doctest::Approx(d.value).epsilon(1e-10));

  // Exponents here are the raw powers of X_i; a power 1 + beta_i carries the
  // finiteness cascade: the first beta_i that is nonzero must be positive.
  const double bad[] = {0.5};
  CHECK_THROWS_AS(integrate_logweighted(-1.0, bad, [](double) { return 1.0; }, QuadratureSpec{}), DivergenceError);
  const double borderline[] = {1.0};
  CHECK_THROWS_AS(integrate_logweighted(-1.0, borderline, [](double) { return 1.0; }, QuadratureSpec{}), DivergenceError);
  // int_0^1 X_1 X_2^{1.2} dr / r = int_0^1 X_1(y)^{1.2} dy / y = 1 / 0.2 with y = X_1(r).
  const double cascade[] = {1.0, 1.2};
  const auto f = integrate_logweighted(-1.0, cascade, [](double) { return 1.0; }, QuadratureSpec{});
  CHECK(f.value == doctest::Approx(5.0).epsilon(1e-9));
  // int_0^D X_1 X_2^2 (r/D) dr / r = 1 for every D, and r^{-1} X_1^2 weighted by r gives int_0^1 e^{1-1/y} dy.
  const double nested[] = {1.0, 2.0};
  CHECK(integrate_logweighted(-1.0, nested, nullptr, QuadratureSpec{}, 2.0).value == doctest::Approx(1.0).epsilon(1e-10));
  const double two[] = {2.0};
  const double e1 = 0.40365263767680767;  // int_0^1 exp(1 - 1/y) dy = 1 - e E_1(1)
  CHECK(integrate_logweighted(-1.0, two, [](double r) { return r; }, QuadratureSpec{}).value ==
        doctest::Approx(e1).epsilon(1e-10));
  CHECK_THROWS_AS(integrate_logweighted(-1.5, betas, [](double) { return 1.0; }, QuadratureSpec{}), DivergenceError);
}
