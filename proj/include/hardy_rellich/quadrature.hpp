#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace hr {

enum class OriginSubstitution { None, Log };

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivisions = 4000;
  OriginSubstitution origin_substitution = OriginSubstitution::None;
  // Cap on doubling panels when integrating out to s = infinity. Panel
  // widths overflow near 2^1024, so the default covers every finite s.
  int max_panels = 1030;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  int subdivisions = 0;
  bool converged = false;
};

// A point of (0, D] carried both as r and as t = ln r. Deep in the log
// substitution r underflows to zero while t stays exact.
struct RadialPoint {
  double r;
  double t;
};

// Globally adaptive 7/15 point Gauss-Kronrod on [a, b]. When a == 0 and
// spec.origin_substitution is Log or declared_power < 0 (integrand ~ r^p at
// the origin), the substitution r = b e^{-s} is applied.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec,
                           std::optional<double> declared_power = std::nullopt);

// Integral over s in [s0, infinity) using doubling panels. The omitted
// tail is estimated from the decay ratio of consecutive panels.
QuadratureResult integrate_to_infinity(const std::function<double(double)>& g, double s0,
                                       const QuadratureSpec& spec,
                                       std::span<const double> breakpoints = {});

// Integral over r in (r_lo, r_hi] of a density given with respect to
// dt = dr / r. The log substitution is used when r_lo == 0 and either the
// spec asks for it or the dr-density behaves like r^p with p < 0.
// Breakpoints are radii where the integrand loses smoothness.
QuadratureResult integrate_log_density(const std::function<double(const RadialPoint&)>& h,
                                       double r_lo, double r_hi, const QuadratureSpec& spec,
                                       double declared_power,
                                       std::span<const double> breakpoints = {});

// Integral over (0, D] of r^p X_1^{b_1} ... X_n^{b_n}(r/D) factor(r) dr.
// Throws DivergenceError when the power/log exponents make it infinite.
QuadratureResult integrate_logweighted(double p, std::span<const double> betas,
                                       const std::function<double(double)>& factor,
                                       const QuadratureSpec& spec, double D = 1.0);

}  // namespace hr
