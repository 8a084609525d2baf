#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/gegenbauer.hpp>
#include <cmath>

#include "hardy_rellich/constants.hpp"
#include "hardy_rellich/errors.hpp"
#include "hardy_rellich/iterlog.hpp"
#include "hardy_rellich/verify.hpp"

namespace hr {

namespace {

// |S^{N-2}| / |S^{N-1}|: turns int_{-1}^{1} h(x) (1-x^2)^{(N-3)/2} dx into a sphere mean.
double zonal_density(int N) {
  return std::exp(boost::math::lgamma(0.5 * N) - boost::math::lgamma(0.5 * (N - 1.0))) / std::sqrt(M_PI);
}

struct Zonal {
  int k;
  double lambda;
  double scale;
  double value(double x) const { return scale * boost::math::gegenbauer(static_cast<unsigned>(k), lambda, x); }
  double prime(double x) const { return scale * boost::math::gegenbauer_prime(static_cast<unsigned>(k), lambda, x); }
};

QuadratureSpec angular_spec() {
  QuadratureSpec q;
  q.rel_tol = 1e-12;
  q.abs_tol = 1e-300;
  return q;
}

Zonal zonal(int k, int N) {
  Zonal z{k, 0.5 * (N - 2.0), 1.0};
  if (k == 0) return z;
  const double w = zonal_density(N), e = 0.5 * (N - 3.0);
  const double ms =
      w * integrate([&](double x) { return std::pow(z.value(x), 2) * std::pow(1.0 - x * x, e); }, -1.0, 1.0, angular_spec()).value;
  z.scale = 1.0 / std::sqrt(ms);
  return z;
}

}  // namespace

double zonal_harmonic_abs_moment(int k, int N, double q) {
  if (N < 3 || k < 0) throw DomainError("zonal_harmonic_abs_moment: need N >= 3 and k >= 0");
  if (k == 0) return 1.0;
  const Zonal z = zonal(k, N);
  const double e = 0.5 * (N - 3.0);
  return zonal_density(N) *
         integrate([&](double x) { return std::pow(std::abs(z.value(x)), q) * std::pow(1.0 - x * x, e); }, -1.0, 1.0,
                   angular_spec())
             .value;
}

SobolevValue sobolev_quotient(SobolevKind which, const TestFunction& tf_in, const QuadratureSpec& quad) {
  const TestFunction tf = to_u_side(tf_in);
  const int N = tf.N();
  if (N < 5) throw DomainError("sobolev_quotient: need N >= 5");
  if (tf.components().size() != 1) throw DomainError("sobolev_quotient: single-mode test functions only");
  const ModeComponent& c = tf.components().front();
  const double n = N;
  const bool lap = which == SobolevKind::Laplacian;
  const double q = lap ? 2.0 * n / (n - 4.0) : 2.0 * n / (n - 2.0);
  const double beta = lap ? 2.0 * (n - 2.0) / (n - 4.0) : 2.0 * (n - 1.0) / (n - 2.0);
  const double outer = lap ? (n - 4.0) / n : (n - 2.0) / n;
  const double log_D = std::log(tf.D());
  const double log_cn = log_sphere_area(N);

  // Log of the angular mean of |phi|^q, or the angular integrand for the gradient.
  const Zonal z = zonal(c.k, N);
  const double lmq = std::log(zonal_harmonic_abs_moment(c.k, N, q));
  const double w = zonal_density(N), e = 0.5 * (N - 3.0);

  auto density = [&](const RadialPoint& p) {
    const EulerJet j = c.profile.euler(p, 1);
    const double lx = beta * std::log(iterated_log_from_log(1, p.t - log_D));
    if (lap) {
      if (j.d[0] == 0.0) return 0.0;
      return std::exp(log_cn + lmq + q * (j.log_scale + std::log(std::abs(j.d[0]))) + n * p.t + lx);
    }
    // r f' = theta f and f / r share the factor exp(log_scale) / r.
    const double a = j.d[1], b = j.d[0];
    double ang = 0.0;
    if (c.k == 0) {
      if (a == 0.0) return 0.0;
      ang = std::pow(std::abs(a), q);
    } else {
      ang = w * integrate(
                    [&](double x) {
                      const double s = 1.0 - x * x;
                      const double phi = z.value(x), dphi = z.prime(x);
                      return std::pow(a * a * phi * phi + b * b * s * dphi * dphi, 0.5 * q) * std::pow(s, e);
                    },
                    -1.0, 1.0, angular_spec())
                    .value;
      if (ang == 0.0) return 0.0;
    }
    return std::exp(log_cn + std::log(ang) + q * (j.log_scale - p.t) + n * p.t + lx);
  };
  const std::vector<double> bps = c.profile.breakpoints();
  const QuadratureResult sob = integrate_log_density(density, 0.0, std::min(tf.D(), c.profile.support()), quad, -1.0, bps);

  Form remainder;
  Term t;
  t.density = Density::Laplacian;
  remainder.push_back(t);
  t.density = lap ? Density::Value : Density::Gradient;
  t.weight_power = lap ? -4.0 : -2.0;
  t.coefficient = lap ? -rellich_constant(N) : -gradient_rellich_constant(N);
  remainder.push_back(t);
  const QuadratureResult rem = integrate_form(tf, remainder, quad);

  if (!(sob.value > 0.0) || !std::isfinite(sob.value))
    throw DomainError("sobolev_quotient: degenerate denominator");
  SobolevValue out;
  out.remainder = rem.value;
  out.sobolev_integral = sob.value;
  out.quotient = rem.value / std::pow(sob.value, outer);
  out.converged = rem.converged && sob.converged;
  return out;
}

}  // namespace hr
