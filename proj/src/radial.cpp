#include "hardy_rellich/radial.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "hardy_rellich/constants.hpp"
#include "hardy_rellich/errors.hpp"
#include "hardy_rellich/iterlog.hpp"

namespace hr {

TestFunction::TestFunction(int N, std::vector<ModeComponent> components, double D, Side side,
                           double v_weight_m, bool allow_singular_origin)
    : N_(N), comps_(std::move(components)), D_(D), side_(side), m_(v_weight_m), singular_(allow_singular_origin) {
  if (N < 3) throw DomainError("TestFunction: dimension must be at least 3");
  if (!(D > 0.0)) throw DomainError("TestFunction: domain radius must be positive");
  std::set<int> seen;
  for (const auto& c : comps_) {
    if (c.k < 0) throw DomainError("TestFunction: mode index must be non-negative");
    if (!seen.insert(c.k).second) throw DomainError("TestFunction: repeated spherical mode " + std::to_string(c.k));
    if (!c.profile.valid()) throw DomainError("TestFunction: empty profile");
    if (c.profile.support() > D * (1.0 + 1e-12)) throw DomainError("TestFunction: profile support exceeds D");
    if (!singular_) {
      const double need = c.k + (side_ == Side::V ? v_exponent() : 0.0);
      if (c.profile.origin_power() < need - 1e-12) {
        std::ostringstream os;
        os << "TestFunction: mode " << c.k << " profile vanishes like r^" << c.profile.origin_power()
           << " at the origin, slower than r^" << need;
        throw DomainError(os.str());
      }
    }
  }
}

int TestFunction::max_order() const {
  int o = kMaxJetOrder;
  for (const auto& c : comps_) o = std::min(o, c.profile.max_order());
  return o;
}

TestFunction TestFunction::radial_part() const {
  std::vector<ModeComponent> out;
  for (const auto& c : comps_)
    if (c.k == 0) out.push_back(c);
  return TestFunction(N_, out, D_, side_, m_, singular_);
}

TestFunction TestFunction::nonradial_part() const {
  std::vector<ModeComponent> out;
  for (const auto& c : comps_)
    if (c.k != 0) out.push_back(c);
  return TestFunction(N_, out, D_, side_, m_, singular_);
}

double log_sphere_area(int N) {
  return std::log(2.0) + 0.5 * N * std::log(M_PI) - std::lgamma(0.5 * N);
}

double sphere_area(int N) { return std::exp(log_sphere_area(N)); }

TestFunction substitute_v(const TestFunction& u, double m) {
  if (u.side() != Side::U) throw DomainError("substitute_v: expects a U-side test function");
  const double a = 0.5 * (u.N() - 4.0 - 2.0 * m);
  std::vector<ModeComponent> out;
  for (const auto& c : u.components()) out.push_back({c.k, times_power(c.profile, a)});
  return TestFunction(u.N(), out, u.D(), Side::V, m, u.allow_singular_origin());
}

TestFunction substitute_u(const TestFunction& v) {
  if (v.side() != Side::V) throw DomainError("substitute_u: expects a V-side test function");
  std::vector<ModeComponent> out;
  for (const auto& c : v.components()) out.push_back({c.k, times_power(c.profile, -v.v_exponent())});
  return TestFunction(v.N(), out, v.D(), Side::U, 0.0, v.allow_singular_origin());
}

TestFunction to_u_side(const TestFunction& tf) { return tf.side() == Side::U ? tf : substitute_u(tf); }

TestFunction mode_operator(const TestFunction& tf) {
  const TestFunction u = to_u_side(tf);
  std::vector<ModeComponent> out;
  for (const auto& c : u.components()) out.push_back({c.k, apply_mode_operator(c.profile, c.k, u.N())});
  return TestFunction(u.N(), out, u.D(), Side::U, 0.0, true);
}

TestFunction polyharmonic_power(const TestFunction& tf, int j) {
  if (j < 0) throw DomainError("polyharmonic_power: power must be non-negative");
  TestFunction out = to_u_side(tf);
  for (int i = 0; i < j; ++i) out = mode_operator(out);
  return out;
}

namespace {

int density_order(const Term& t) {
  const Density d = t.density;
  if (d == Density::EulerSquare) return t.euler[2] != 0.0 ? 2 : (t.euler[1] != 0.0 ? 1 : 0);
  switch (d) {
    case Density::Value: return 0;
    case Density::RadialDerivative:
    case Density::Gradient: return 1;
    default: return 2;
  }
}

// Power of r carried by the density relative to f^2.
double density_homogeneity(Density d) {
  switch (d) {
    case Density::Value:
    case Density::EulerSquare: return 0.0;
    case Density::RadialDerivative:
    case Density::Gradient:
    case Density::ValueLaplacian: return -2.0;
    default: return -4.0;
  }
}

// Largest |theta^j f| entering the density; dividing by it keeps squares of
// tiny derivatives from underflowing before the exponential weight is applied.
double density_scale(const Term& t, const EulerJet& e, double c) {
  auto mx = [&](bool u0, bool u1, bool u2) {
    double s = 0.0;
    if (u0) s = std::max(s, std::abs(e.d[0]));
    if (u1) s = std::max(s, std::abs(e.d[1]));
    if (u2) s = std::max(s, std::abs(e.d[2]));
    return s;
  };
  switch (t.density) {
    case Density::Value: return mx(true, false, false);
    case Density::RadialDerivative: return mx(false, true, false);
    case Density::Gradient: return mx(c != 0.0, true, false);
    case Density::SecondDerivative: return mx(false, true, true);
    case Density::Laplacian: return mx(c != 0.0, true, true);
    case Density::ValueLaplacian: return mx(true, true, true);
    case Density::EulerSquare: return mx(t.euler[0] != 0.0, t.euler[1] != 0.0, t.euler[2] != 0.0);
  }
  return 1.0;
}

double density_value(const Term& t, const EulerJet& e, double c, int N) {
  switch (t.density) {
    case Density::Value: return e.d[0] * e.d[0];
    case Density::RadialDerivative: return e.d[1] * e.d[1];
    case Density::Gradient: return e.d[1] * e.d[1] + c * e.d[0] * e.d[0];
    case Density::SecondDerivative: {
      const double s = e.d[2] - e.d[1];
      return s * s;
    }
    case Density::Laplacian: {
      const double l = e.d[2] + (N - 2) * e.d[1] - c * e.d[0];
      return l * l;
    }
    case Density::ValueLaplacian: return e.d[0] * (e.d[2] + (N - 2) * e.d[1] - c * e.d[0]);
    case Density::EulerSquare: {
      double s = t.euler[0] * e.d[0];
      if (t.euler[1] != 0.0) s += t.euler[1] * e.d[1];
      if (t.euler[2] != 0.0) s += t.euler[2] * e.d[2];
      return s * s;
    }
  }
  return 0.0;
}

struct Resolved {
  ProfileTransform transform;
  RadialProfile profile;
  int order = 0;
  double c = 0.0;
};

QuadratureResult integrate_component(const ModeComponent& comp, int N, double D, const Form& form,
                                     const QuadratureSpec& spec) {
  std::vector<Resolved> profiles;
  std::vector<size_t> which(form.size());
  double declared = std::numeric_limits<double>::infinity();
  std::vector<double> breaks;
  for (size_t i = 0; i < form.size(); ++i) {
    const Term& t = form[i];
    auto it = std::find_if(profiles.begin(), profiles.end(),
                           [&](const Resolved& r) { return r.transform == t.transform; });
    if (it == profiles.end()) {
      Resolved r;
      r.transform = t.transform;
      RadialProfile p = comp.profile;
      const double shift = t.transform.power + t.transform.power_per_mode * comp.k;
      if (shift != 0.0) p = times_power(p, shift);
      const int k_eff = t.transform.radial ? 0 : comp.k;
      for (int j = 0; j < t.transform.laplacian_power; ++j) p = apply_mode_operator(p, k_eff, N);
      r.profile = p;
      r.c = mode_eigenvalue(k_eff, N);
      profiles.push_back(r);
      it = profiles.end() - 1;
    }
    it->order = std::max(it->order, density_order(t));
    which[i] = static_cast<size_t>(it - profiles.begin());
    const double p = 2.0 * it->profile.origin_power() + density_homogeneity(t.density) + t.weight_power + N - 1.0 +
                     t.extra_origin_power;
    declared = std::min(declared, p);
  }
  for (const auto& r : profiles) {
    if (r.order > r.profile.max_order()) {
      throw DifferentiabilityError("integrate_form: density needs derivative order " + std::to_string(r.order) +
                                   " of " + r.profile.describe());
    }
    for (double b : r.profile.breakpoints()) breaks.push_back(b);
  }
  const double log_cn = log_sphere_area(N);
  const double log_D = std::log(D);
  double upper = 0.0;
  for (const auto& r : profiles) upper = std::max(upper, std::min(D, r.profile.support()));
  if (form.empty() || upper <= 0.0) return {0.0, 0.0, 0, 0, true};

  auto h = [&](const RadialPoint& p) {
    EulerJet jets[8];
    const size_t np = profiles.size();
    EulerJet* jp = np <= 8 ? jets : nullptr;
    std::vector<EulerJet> heap;
    if (!jp) {
      heap.resize(np);
      jp = heap.data();
    }
    for (size_t j = 0; j < np; ++j) jp[j] = profiles[j].profile.euler(p, profiles[j].order);
    double sum = 0.0;
    for (size_t i = 0; i < form.size(); ++i) {
      const Term& t = form[i];
      const Resolved& r = profiles[which[i]];
      const EulerJet& e = jp[which[i]];
      if (t.coefficient == 0.0) continue;
      const double sc = density_scale(t, e, r.c);
      if (sc == 0.0 || !std::isfinite(sc)) {
        if (!std::isfinite(sc)) sum += sc;
        continue;
      }
      EulerJet en = e;
      for (int j = 0; j <= e.order; ++j) en.d[j] /= sc;
      const double q = density_value(t, en, r.c, N);
      if (q == 0.0) continue;
      double ls = log_cn + 2.0 * (e.log_scale + std::log(sc)) + (N + t.weight_power + density_homogeneity(t.density)) * p.t;
      if (t.series > 0) ls += log_series_weight(t.series, std::min(0.0, p.t - log_D));
      double w = t.coefficient * q * std::exp(ls);
      if (t.extra) w *= t.extra(p);
      sum += w;
    }
    return sum;
  };
  return integrate_log_density(h, 0.0, upper, spec, declared, breaks);
}

void accumulate(QuadratureResult& acc, const QuadratureResult& r, bool first) {
  acc.value += r.value;
  acc.error_estimate += r.error_estimate;
  acc.evaluations += r.evaluations;
  acc.subdivisions += r.subdivisions;
  acc.converged = (first ? true : acc.converged) && r.converged;
}

}  // namespace

QuadratureResult integrate_form(const TestFunction& tf, const FormBuilder& form, const QuadratureSpec& spec) {
  QuadratureResult acc;
  acc.converged = true;
  bool first = true;
  for (const auto& c : tf.components()) {
    accumulate(acc, integrate_component(c, tf.N(), tf.D(), form(c.k), spec), first);
    first = false;
  }
  return acc;
}

QuadratureResult integrate_form(const TestFunction& tf, const Form& form, const QuadratureSpec& spec) {
  return integrate_form(tf, [&form](int) { return form; }, spec);
}

namespace {

Term term(double coef, Density d, double w, ProfileTransform tr = {}, int series = 0) {
  Term t;
  t.coefficient = coef;
  t.density = d;
  t.weight_power = w;
  t.transform = tr;
  t.series = series;
  return t;
}

struct Piece {
  std::string name;
  Form form;
};

// Evaluates the pieces separately for the report and their sum in one pass.
FunctionalValue evaluate_pieces(const TestFunction& tf, const std::vector<Piece>& pieces, const QuadratureSpec& spec) {
  FunctionalValue out;
  Form all;
  out.converged = true;
  for (const auto& p : pieces) {
    const QuadratureResult r = integrate_form(tf, p.form, spec);
    out.components.push_back({p.name, r.value});
    out.quadrature_error += r.error_estimate;
    out.converged = out.converged && r.converged;
    all.insert(all.end(), p.form.begin(), p.form.end());
  }
  if (pieces.size() == 1) {
    out.value = out.components.front().value;
    return out;
  }
  const QuadratureResult r = integrate_form(tf, all, spec);
  out.value = r.value;
  out.quadrature_error += r.error_estimate;
  out.converged = out.converged && r.converged;
  return out;
}

double check_weight(const TestFunction& u, double m) {
  if (!(m >= 0.0) || !(m < 0.5 * (u.N() - 4.0)))
    throw DomainError("functional: weight m must lie in [0, (N-4)/2)");
  return m;
}

}  // namespace

const char* functional_name(Functional f) {
  switch (f) {
    case Functional::Rellich: return "rellich";
    case Functional::GradientRellich: return "gradient_rellich";
    case Functional::VRellich: return "v_rellich";
    case Functional::VGradientRellich: return "v_gradient_rellich";
    case Functional::WeightedLaplacian: return "weighted_laplacian";
    case Functional::WeightedGradient: return "weighted_gradient";
    case Functional::WeightedHardy: return "weighted_hardy";
    case Functional::Series: return "series";
  }
  return "?";
}

FunctionalValue functional(const FunctionalRequest& req, const TestFunction& tf, const QuadratureSpec& spec) {
  const TestFunction u = to_u_side(tf);
  const int N = u.N();
  const double n = N;
  switch (req.kind) {
    case Functional::Rellich: {
      const double s0 = rellich_constant(N);
      FunctionalValue out = evaluate_pieces(
          u, {{"laplacian", {term(1.0, Density::Laplacian, 0.0)}}, {"hardy", {term(-s0, Density::Value, -4.0)}}},
          spec);
      const ProfileTransform g{0.5 * (n - 4.0), -1.0, 0, true};
      const auto red = integrate_form(
          u,
          [&](int k) {
            const double c = mode_eigenvalue(k, N);
            return Form{term(1.0, Density::SecondDerivative, 2.0 * k - n + 4.0, g),
                        term(n * (n - 4.0) / 2.0 + 2.0 * k * (n - 3.0) + 3.0, Density::RadialDerivative,
                             2.0 * k - n + 2.0, g),
                        term(n * (n - 4.0) / 2.0 * (c + k * k), Density::Value, 2.0 * k - n, g)};
          },
          spec);
      out.reduced = red.value;
      out.reduced_error = red.error_estimate;
      return out;
    }
    case Functional::GradientRellich: {
      const double g0 = gradient_rellich_constant(N);
      FunctionalValue out = evaluate_pieces(
          u,
          {{"laplacian", {term(1.0, Density::Laplacian, 0.0)}}, {"gradient", {term(-g0, Density::Gradient, -2.0)}}},
          spec);
      const ProfileTransform g{0.5 * (n - 4.0), -1.0, 0, true};
      const auto red = integrate_form(
          u,
          [&](int k) {
            const double c = mode_eigenvalue(k, N);
            return Form{term(1.0, Density::SecondDerivative, 2.0 * k - n + 4.0, g),
                        term((2.0 * k + n - 1.0) * (n - 3.0) - n * (3.0 * n - 8.0) / 4.0, Density::RadialDerivative,
                             2.0 * k - n + 2.0, g),
                        term(n * (3.0 * n - 8.0) / 4.0 * k * k + n * (n - 8.0) / 4.0 * c, Density::Value, 2.0 * k - n,
                             g)};
          },
          spec);
      out.reduced = red.value;
      out.reduced_error = red.error_estimate;
      return out;
    }
    case Functional::VRellich:
    case Functional::VGradientRellich: {
      if (N < 5) throw DomainError("functional: v-side forms need N >= 5");
      const TestFunction v = substitute_v(u, 0.0);
      const double last = req.kind == Functional::VRellich ? n * (n - 4.0) / 2.0 : n * (n - 8.0) / 4.0;
      FunctionalValue out = evaluate_pieces(v,
                                            {{"v_laplacian", {term(1.0, Density::Laplacian, 4.0 - n)}},
                                             {"v_radial", {term(-n * (n - 4.0), Density::RadialDerivative, 2.0 - n)}},
                                             {"v_gradient", {term(last, Density::Gradient, 2.0 - n)}}},
                                            spec);
      const FunctionalValue direct = functional(
          {req.kind == Functional::VRellich ? Functional::Rellich : Functional::GradientRellich}, u, spec);
      out.reduced = direct.value;
      out.reduced_error = direct.quadrature_error;
      return out;
    }
    case Functional::WeightedLaplacian: {
      const double m = check_weight(u, req.m);
      FunctionalValue out = evaluate_pieces(u, {{"laplacian", {term(1.0, Density::Laplacian, -2.0 * m)}}}, spec);
      const auto red = integrate_form(
          u,
          [&](int k) {
            const double c = mode_eigenvalue(k, N);
            return Form{term(1.0, Density::SecondDerivative, -2.0 * m),
                        term((n - 1.0) * (2.0 * m + 1.0) + 2.0 * c, Density::RadialDerivative, -2.0 * m - 2.0),
                        term(c * (c + (n - 4.0 - 2.0 * m) * (2.0 * m + 2.0)), Density::Value, -4.0 - 2.0 * m)};
          },
          spec);
      out.reduced = red.value;
      out.reduced_error = red.error_estimate;
      return out;
    }
    case Functional::WeightedGradient: {
      const double m = check_weight(u, req.m);
      FunctionalValue out = evaluate_pieces(u, {{"gradient", {term(1.0, Density::Gradient, -2.0 * m - 2.0)}}}, spec);
      const double b = 0.5 * (n - 4.0 - 2.0 * m);
      const ProfileTransform v{b, 0.0, 0, false};
      const auto red =
          integrate_form(u, Form{term(1.0, Density::Gradient, -(n - 2.0), v), term(b * b, Density::Value, -n, v)}, spec);
      out.reduced = red.value;
      out.reduced_error = red.error_estimate;
      return out;
    }
    case Functional::WeightedHardy: {
      const double m = check_weight(u, req.m);
      FunctionalValue out = evaluate_pieces(u, {{"hardy", {term(1.0, Density::Value, -2.0 * m - 4.0)}}}, spec);
      const ProfileTransform v{0.5 * (n - 4.0 - 2.0 * m), 0.0, 0, false};
      const auto red = integrate_form(u, Form{term(1.0, Density::Value, -n, v)}, spec);
      out.reduced = red.value;
      out.reduced_error = red.error_estimate;
      return out;
    }
    case Functional::Series: {
      const double m = check_weight(u, req.m);
      if (req.series_index < 1) throw DomainError("functional: series index must be >= 1");
      Term t;
      switch (req.series_density) {
        case Functional::WeightedHardy: t = term(1.0, Density::Value, -2.0 * m - 4.0, {}, req.series_index); break;
        case Functional::WeightedGradient:
          t = term(1.0, Density::Gradient, -2.0 * m - 2.0, {}, req.series_index);
          break;
        case Functional::WeightedLaplacian: t = term(1.0, Density::Laplacian, -2.0 * m, {}, req.series_index); break;
        default: throw DomainError("functional: series density must be a weighted Hardy, gradient or Laplacian term");
      }
      return evaluate_pieces(u, {{"series", {t}}}, spec);
    }
  }
  throw DomainError("functional: unknown kind");
}

}  // namespace hr
