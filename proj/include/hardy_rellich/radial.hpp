#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hardy_rellich/profile.hpp"
#include "hardy_rellich/quadrature.hpp"

namespace hr {

// One term f_k(r) phi_k(sigma) of a spherical harmonic expansion. The
// harmonic phi_k is normalised so that its mean square over the sphere is 1,
// which makes phi_0 = 1 and every integral a multiple of the sphere area c_N.
struct ModeComponent {
  int k = 0;
  RadialProfile profile;
};

enum class Side {
  U,  // the profiles are those of u
  V,  // the profiles are those of v = |x|^{(N-4-2m)/2} u
};

class TestFunction {
public:
  // Throws DomainError for repeated modes, N < 3, supports beyond D, or
  // profiles vanishing slower than r^k at the origin (unless singular
  // origins are allowed, as for minimizing sequences).
  TestFunction(int N, std::vector<ModeComponent> components, double D = 1.0, Side side = Side::U,
               double v_weight_m = 0.0, bool allow_singular_origin = false);

  int N() const { return N_; }
  double D() const { return D_; }
  Side side() const { return side_; }
  // Weight m defining v = |x|^{(N-4-2m)/2} u on the V side.
  double v_weight_m() const { return m_; }
  double v_exponent() const { return 0.5 * (N_ - 4.0 - 2.0 * m_); }
  bool allow_singular_origin() const { return singular_; }
  const std::vector<ModeComponent>& components() const { return comps_; }
  // Largest derivative order available on every component.
  int max_order() const;
  // k = 0 component alone (empty if absent) and the remainder.
  TestFunction radial_part() const;
  TestFunction nonradial_part() const;

private:
  int N_;
  std::vector<ModeComponent> comps_;
  double D_;
  Side side_;
  double m_;
  bool singular_;
};

// Surface area of the unit sphere in R^N.
double sphere_area(int N);
double log_sphere_area(int N);

// Change of unknown v = |x|^{(N-4-2m)/2} u, mode by mode, and its inverse.
TestFunction substitute_v(const TestFunction& u, double m);
TestFunction substitute_u(const TestFunction& v);
TestFunction to_u_side(const TestFunction& tf);

// Component-wise Laplacian: each f_k is replaced by L_k f_k.
TestFunction mode_operator(const TestFunction& tf);
TestFunction polyharmonic_power(const TestFunction& tf, int j);

// Pointwise quadratic densities of one mode, in terms of its profile f.
enum class Density {
  Value,             // f^2
  RadialDerivative,  // f'^2, the square of the radial derivative
  Gradient,          // f'^2 + c_k f^2 / r^2
  SecondDerivative,  // f''^2
  Laplacian,         // (L_k f)^2
  ValueLaplacian,    // f L_k f
  EulerSquare,       // (a_0 f + a_1 theta f + a_2 theta^2 f)^2 with theta = r d/dr
};

// Profile fed to a density: L^laplacian_power (r^{power + power_per_mode * k} f).
// With `radial` set the profile is treated as a function of r alone (c_k = 0).
struct ProfileTransform {
  double power = 0.0;
  double power_per_mode = 0.0;
  int laplacian_power = 0;
  bool radial = false;
  bool operator==(const ProfileTransform&) const = default;
};

// coefficient * int density |x|^weight_power X_1^2...X_series^2(|x|/D) extra(|x|) dx
struct Term {
  double coefficient = 1.0;
  Density density = Density::Value;
  ProfileTransform transform{};
  double weight_power = 0.0;
  int series = 0;
  // Coefficients a_j of the EulerSquare density.
  std::array<double, 3> euler{};
  std::function<double(const RadialPoint&)> extra;
  // Leading power of `extra` at the origin.
  double extra_origin_power = 0.0;
};
using Form = std::vector<Term>;
// Mode-dependent form builder: the coefficients of many identities depend on k.
using FormBuilder = std::function<Form(int k)>;

// Sum over components of the integral of the form, in one quadrature pass.
QuadratureResult integrate_form(const TestFunction& tf, const FormBuilder& form, const QuadratureSpec& spec);
QuadratureResult integrate_form(const TestFunction& tf, const Form& form, const QuadratureSpec& spec);

enum class Functional {
  Rellich,            // int |Lap u|^2 - (N(N-4)/4)^2 int u^2/|x|^4
  GradientRellich,    // int |Lap u|^2 - N^2/4 int |grad u|^2/|x|^2
  VRellich,           // v-side form equal to Rellich
  VGradientRellich,   // v-side form equal to GradientRellich
  WeightedLaplacian,  // int |Lap u|^2 / |x|^{2m}
  WeightedGradient,   // int |grad u|^2 / |x|^{2m+2}
  WeightedHardy,      // int u^2 / |x|^{2m+4}
  Series,             // series-weighted version of series_density
};

struct FunctionalRequest {
  Functional kind = Functional::Rellich;
  double m = 0.0;
  int series_index = 0;
  Functional series_density = Functional::WeightedHardy;
};

struct NamedValue {
  std::string name;
  double value = 0.0;
};

struct FunctionalValue {
  double value = 0.0;
  std::vector<NamedValue> components;
  double quadrature_error = 0.0;
  bool converged = false;
  // The same quantity through a reduction identity, where one exists.
  std::optional<double> reduced;
  double reduced_error = 0.0;
};

FunctionalValue functional(const FunctionalRequest& req, const TestFunction& tf, const QuadratureSpec& spec);

const char* functional_name(Functional f);

}  // namespace hr
