#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "hardy_rellich/errors.hpp"
#include "hardy_rellich/iterlog.hpp"
#include "hardy_rellich/minseq.hpp"

using namespace hr;

namespace {

MinSeqParams params(int N, double eps, std::vector<double> a, double m = 0.0, int k = 0) {
  MinSeqParams p;
  p.N = N;
  p.epsilon = eps;
  p.a = std::move(a);
  p.m = m;
  p.mode_k = k;
  return p;
}

// u / phi written out from the definition, K log factors.
double closed_form_w(const MinSeqParams& p, double r) {
  double w = std::pow(r, -(p.N - 4.0) / 2.0 + p.m + p.epsilon);
  for (size_t i = 0; i < p.a.size(); ++i) w *= std::pow(iterated_log(static_cast<int>(i) + 1, r), (-1.0 + p.a[i]) / 2.0);
  return w;
}

double closed_form_eta(const MinSeqParams& p, double r) {
  double eta = 0.0, prod = 1.0;
  for (size_t i = 0; i < p.a.size(); ++i) {
    prod *= iterated_log(static_cast<int>(i) + 1, r);
    eta += (-1.0 + p.a[i]) * prod;
  }
  return eta;
}

}  // namespace

TEST_CASE("cutoff is flat, monotone and C^4") {
  const CutoffSpec c;
  CHECK(cutoff_value(c, 0.2) == 1.0);
  CHECK(cutoff_value(c, 0.5) == 1.0);
  CHECK(cutoff_value(c, 1.0) == 0.0);
  double last = 1.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = cutoff_value(c, 0.5 + 0.005 * i);
    CHECK(v <= last + 1e-15);
    last = v;
  }
}

TEST_CASE("parameter validation") {
  MinSeqParams rough = params(6, 0.1, {0.1});
  rough.cutoff.smoothness = 3;
  CHECK_THROWS_AS(build_minimizer(rough), DomainError);
  CHECK_THROWS_AS(build_minimizer(params(4, 0.1, {0.1})), DomainError);
  CHECK_THROWS_AS(build_minimizer(params(6, 0.0, {0.1})), DomainError);
  CHECK_THROWS_AS(build_minimizer(params(6, 1.0, {0.1})), DomainError);
  CHECK_THROWS_AS(build_minimizer(params(6, 0.1, {0.0})), DomainError);
  CHECK_THROWS_AS(build_minimizer(params(6, 0.1, {0.1}, 1.0)), DomainError);
  CHECK_THROWS_AS(rayleigh_quotient(Family::Ray1, params(8, 0.1, {0.1}, 0.5), 1, QuadratureSpec{}), DomainError);
  CHECK_THROWS_AS(rayleigh_quotient(Family::E77, params(12, 0.1, {0.1}, 3.0), 1, QuadratureSpec{}), DomainError);
  CHECK_THROWS_AS(rayleigh_quotient(Family::Ray1, params(6, 0.1, {0.1}, 0.0, 1), 1, QuadratureSpec{}), DomainError);
}

TEST_CASE("minimizer profiles match the defining formula") {
  // a_1 = 1 removes the log factor.
  const MinSeqParams plain = params(6, 0.1, {1.0});
  const RadialProfile f = minimizer_profile(plain);
  for (double r : {0.01, 0.2, 0.45, 0.7, 0.9})
    CHECK(f.value(r) == doctest::Approx(std::pow(r, -1.0 + 0.1) * cutoff_value(plain.cutoff, r)).epsilon(1e-13));
  const MinSeqParams p = params(6, 0.1, {0.2});
  const double r = std::exp(-1.0);
  CHECK(minimizer_profile(p).value(r) == doctest::Approx(std::exp(0.9) * std::pow(0.5, -0.4)).epsilon(1e-13));
  Gen g(61);
  for (int i = 0; i < 50; ++i) {
    const MinSeqParams q = params(g.integer(5, 14), g.uniform(1e-3, 0.5), {g.uniform(0.01, 1.0), g.uniform(0.01, 1.0)});
    const double x = g.uniform(0.01, 0.5);
    CHECK(minimizer_profile(q).value(x) == doctest::Approx(closed_form_w(q, x)).epsilon(1e-12));
  }
}

TEST_CASE("property: first derivative follows the eta formula") {
  Gen g(62);
  for (int i = 0; i < kPropertyTrials; ++i) {
    const int K = g.integer(1, 3);
    std::vector<double> a;
    for (int j = 0; j < K; ++j) a.push_back(g.uniform(0.01, 1.0));
    const MinSeqParams p = params(g.integer(5, 20), g.uniform(1e-4, 0.5), a);
    const double r = g.uniform(0.05, 0.45);
    const double w = closed_form_w(p, r);
    const double expected = w / r * (-(p.N - 4.0) / 2.0 + p.epsilon + 0.5 * closed_form_eta(p, r));
    CHECK(minimizer_profile(p).derivatives(r, 1)[1] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(eta(p, r) == doctest::Approx(closed_form_eta(p, r)).epsilon(1e-13));
  }
}

TEST_CASE("property: analytic derivatives of orders 1 to 4 match finite differences") {
  Gen g(63);
  for (int i = 0; i < kPropertyTrials; ++i) {
    const MinSeqParams p = params(g.integer(5, 20), g.uniform(1e-4, 0.5), {g.uniform(0.01, 1.0), g.uniform(0.01, 1.0)}, 0.0);
    const RadialProfile f = minimizer_profile(p);
    const double r = g.uniform(0.05, 0.45), h = 1e-5 * r;
    const auto d = f.derivatives(r, 4), up = f.derivatives(r + h, 3), dn = f.derivatives(r - h, 3);
    for (int j = 1; j <= 4; ++j) CHECK(d[j] == doctest::Approx((up[j - 1] - dn[j - 1]) / (2.0 * h)).epsilon(1e-5));
  }
}

TEST_CASE("property: r eta'(r) equals B(r)") {
  Gen g(64);
  for (int i = 0; i < kPropertyTrials; ++i) {
    const MinSeqParams p = params(6, 0.1, {g.uniform(0.01, 1.0), g.uniform(0.01, 1.0), g.uniform(0.01, 1.0)});
    const double r = g.uniform(0.01, 0.95), h = 1e-5 * r;
    // Fourth-order central difference.
    const double d = (-eta(p, r + 2 * h) + 8 * eta(p, r + h) - 8 * eta(p, r - h) + eta(p, r - 2 * h)) / (12 * h);
    CHECK(r * d == doctest::Approx(eta_B(p, r)).epsilon(1e-8).scale(1e-10));
  }
}

TEST_CASE("Rayleigh quotient examples") {
  const QuadratureSpec q;
  CHECK(rayleigh_quotient(Family::Ray2, params(6, 1e-3, {0.05}), 1, q).value > 0.25);
  const double c1 = rayleigh_quotient(Family::Cmp6, params(5, 1e-2, {0.1}), 1, q).value;
  const double c2 = rayleigh_quotient(Family::Cmp6, params(5, 3e-3, {0.05}), 1, q).value;
  CHECK(std::isfinite(c1));
  CHECK(c1 >= 6.25);
  CHECK(c2 >= 6.25);
  CHECK(c2 < c1);
  const QuotientValue amn = rayleigh_quotient(Family::Amn, params(30, 1e-3, {}, 8.0, 2), 1, q);
  const double target = 30625.0 / 85.0;
  CHECK(amn.value >= target - 1e-9);
  CHECK(amn.value <= 1.1 * target);
  CHECK(theoretical_constant(Family::Amn, params(30, 1e-3, {}, 8.0, 2)) == doctest::Approx(target).epsilon(1e-15));
  // K = 1 with a_1 = 1: no correction factor, quotient still above the constant.
  CHECK(rayleigh_quotient(Family::Ray1, params(6, 1e-2, {1.0}), 1, q).value >= 2.5);
}

TEST_CASE("property: every quotient respects the inequality direction") {
  Gen g(65);
  const QuadratureSpec q;
  const Family families[] = {Family::Ray1, Family::Ray2, Family::T84, Family::E77, Family::Amn,
                             Family::Cmp1, Family::Cmp2, Family::Cmp3, Family::Cmp4, Family::Cmp5, Family::Cmp6};
  for (int i = 0; i < 120; ++i) {
    const Family f = families[i % 11];
    MinSeqParams p = params(g.integer(5, 16), g.log_uniform(1e-6, 0.2), {});
    const int K = uses_log_factors(f) ? g.integer(1, 2) : 1;
    for (int j = 0; j < (uses_log_factors(f) ? K : 0); ++j) p.a.push_back(g.log_uniform(1e-3, 0.5));
    if (f == Family::T84) p.m = g.uniform(0.0, 0.5 * (p.N - 4.0) * 0.95);
    if (f == Family::E77) p.m = g.uniform(0.0, m_star(p.N));
    if (f == Family::Amn) {
      p.m = g.uniform(0.0, 0.5 * (p.N - 4.0) * 0.95);
      p.mode_k = g.integer(0, 3);
    }
    const QuotientValue v = rayleigh_quotient(f, p, K, q);
    CHECK(std::isfinite(v.value));
    CHECK(v.value >= theoretical_constant(f, p) - 1e-9);
  }
}

TEST_CASE("schedules") {
  const MinSeqParams base = params(6, 1e-2, {0.1});
  const auto s = default_schedule(Family::Ray1, base);
  REQUIRE(s.size() >= 6);
  for (size_t i = 1; i < s.size(); ++i) {
    const bool eps_down = s[i].epsilon < s[i - 1].epsilon && s[i].a == s[i - 1].a;
    const bool a_down = s[i].epsilon == s[i - 1].epsilon && s[i].a[0] < s[i - 1].a[0];
    CHECK((eps_down || a_down));
    // a_i only shrink once epsilon has reached its last value.
    if (a_down) CHECK(s[i].epsilon == s.back().epsilon);
  }
  CHECK(default_schedule(Family::Amn, params(30, 1e-2, {}, 8.0, 2)).size() == 4);
  const auto parsed = parse_schedule("1e-2:0.1;1e-3:0.05,0.2", base);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[1].epsilon == 1e-3);
  CHECK(parsed[1].a == std::vector<double>{0.05, 0.2});
  CHECK_THROWS_AS(parse_schedule("bad", base), ParseError);
  CHECK_THROWS_AS(parse_schedule("1e-2:0.1;;", base), ParseError);
  CHECK_THROWS_AS(parse_schedule("", base), ParseError);
}

TEST_CASE("short RAY1 scan decreases strictly") {
  const MinSeqParams base = params(6, 1e-2, {0.1});
  const auto sched = parse_schedule("1e-2:0.1;1e-3:0.1;1e-10:0.1;1e-300:0.1;1e-300:0.03;1e-300:0.01", base);
  const ScanResult r = scan_to_limit(Family::Ray1, sched, QuadratureSpec{});
  CHECK(r.steps.size() == 6);
  CHECK(r.strictly_decreasing);
  CHECK(r.monotone);
  CHECK(r.theoretical == 2.5);
  CHECK(r.extrapolated == r.steps.back().quotient.value);
  CHECK(r.aitken.has_value());
  for (const auto& st : r.steps) CHECK(st.quotient.value >= 2.5);
}

TEST_CASE("weighted gradient scan at N = 12, m = 1 decreases toward 1/4") {
  MinSeqParams base = params(12, 1e-2, {0.1}, 1.0);
  const ScanResult r = scan_to_limit(Family::E77, default_schedule(Family::E77, base), QuadratureSpec{});
  CHECK(r.strictly_decreasing);
  CHECK(r.steps.back().quotient.value >= 0.25);
  CHECK(r.steps.back().quotient.value < r.steps.front().quotient.value);
}

TEST_CASE("asymptotic ratios move toward 1 for the sixth functional") {
  const QuadratureSpec q;
  const auto a = functional_asymptotics(Asymptotic::VI, params(6, 1e-3, {0.05}), q);
  const auto b = functional_asymptotics(Asymptotic::VI, params(6, 1e-4, {0.02}), q);
  CHECK(a.lhs > 0.0);
  CHECK(a.rhs_leading > 0.0);
  CHECK(a.ratio == doctest::Approx(a.lhs / a.rhs_leading).epsilon(1e-14));
  CHECK(std::abs(b.ratio - 1.0) < std::abs(a.ratio - 1.0));
}

TEST_CASE("V-side minimizer is r^eps times the log factors and cutoff") {
  const MinSeqParams p = params(9, 1e-300, {0.1});
  const TestFunction v = build_minimizer_v(p);
  CHECK(v.side() == Side::V);
  const double r = 0.3;
  CHECK(v.components()[0].profile.value(r) ==
        doctest::Approx(std::pow(iterated_log(1, r), (-1.0 + 0.1) / 2.0)).epsilon(1e-13));
}
