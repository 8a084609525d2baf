#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "hardy_rellich/jet.hpp"
#include "hardy_rellich/quadrature.hpp"

namespace hr {

// Euler derivatives theta^j f with theta = r d/dr, stored as
// theta^j f(r) = exp(log_scale) * d[j]. Keeping the magnitude in the
// exponent lets profiles like r^{-13} be evaluated at r = e^{-5000}.
struct EulerJet {
  double log_scale = 0.0;
  int order = 0;
  std::array<double, kMaxJetOrder + 1> d{};
};

class ProfileImpl {
public:
  virtual ~ProfileImpl() = default;
  virtual EulerJet euler(const RadialPoint& p, int order) const = 0;
  virtual int max_order() const = 0;
  // Leading power of r at the origin.
  virtual double origin_power() const = 0;
  // The profile vanishes for r >= support().
  virtual double support() const = 0;
  // Radii where derivatives of the profile jump.
  virtual std::vector<double> breakpoints() const { return {}; }
  virtual std::string describe() const = 0;
  // True for profiles interpolating sampled data.
  virtual bool sampled() const { return false; }
};

// Immutable radial profile f(r) with exact derivatives. Cheap to copy.
class RadialProfile {
public:
  RadialProfile() = default;
  explicit RadialProfile(std::shared_ptr<const ProfileImpl> impl) : impl_(std::move(impl)) {}

  EulerJet euler(const RadialPoint& p, int order) const;
  EulerJet euler(double r, int order) const;
  // Ordinary derivatives f, f', ..., f^{(order)} at r > 0.
  std::vector<double> derivatives(double r, int order) const;
  double value(double r) const;

  int max_order() const { return impl_->max_order(); }
  double origin_power() const { return impl_->origin_power(); }
  double support() const { return impl_->support(); }
  std::vector<double> breakpoints() const { return impl_->breakpoints(); }
  std::string describe() const { return impl_->describe(); }
  bool sampled() const { return impl_->sampled(); }
  bool valid() const { return static_cast<bool>(impl_); }

private:
  std::shared_ptr<const ProfileImpl> impl_;
};

// Jet of r and of 1 - r/D in the variable t = ln r, about the given point.
Jet r_jet(const RadialPoint& p, int order);
Jet one_minus_r_jet(const RadialPoint& p, int order, double D);

// f(r) = r^power G(ln r). The callback returns the Taylor jet of G in t.
struct ClosedForm {
  double power = 0.0;
  std::function<Jet(const RadialPoint&, int)> G;
  // Optional log magnitude carried outside G: the profile is r^power exp(log_scale) G.
  std::function<double(const RadialPoint&)> log_scale;
  double support = 1.0;
  double origin_power = 0.0;
  int max_order = kMaxJetOrder;
  std::vector<double> breakpoints;
  std::string description = "closed form";
};
RadialProfile make_closed_form(ClosedForm spec);

// r^lead (1 - r/D)^boundary q(r), q a polynomial with coefficients q[i] of r^i.
RadialProfile make_polynomial_bump(int lead, int boundary, std::vector<double> q, double D = 1.0);

// C^2 quintic Hermite interpolant through (r_i, f_i, f'_i, f''_i). The
// first knot must be r = 0; the profile vanishes beyond the last knot.
// Missing derivative columns are estimated by finite differences.
struct SplineData {
  std::vector<double> r, f, df, d2f;
};
RadialProfile make_quintic_spline(SplineData data, double declared_origin_power = 0.0);
// Columns r, f and optionally f', f''. '#' starts a comment; a header row is allowed.
SplineData read_profile_csv(std::istream& in);
RadialProfile load_profile_csv(const std::string& path, double declared_origin_power = 0.0);

// r^alpha f
RadialProfile times_power(const RadialProfile& f, double alpha);
// L_k f = f'' + (N-1) f'/r - c_k f/r^2, the Laplacian on the k-th spherical mode.
RadialProfile apply_mode_operator(const RadialProfile& f, int k, int N);

// Checks that f(r)/r^p stays bounded as r -> 0 by sampling.
bool origin_power_consistent(const RadialProfile& f, double p);

}  // namespace hr
