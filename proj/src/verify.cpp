#include "hardy_rellich/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <sstream>

#include "hardy_rellich/constants.hpp"
#include "hardy_rellich/errors.hpp"
#include "json.hpp"

namespace hr {

namespace {

// A case the check cannot apply to, with the violated hypothesis.
struct Skip {
  std::string reason;
};

Term term(double coef, Density d, double w, ProfileTransform tr = {}, int series = 0) {
  Term t;
  t.coefficient = coef;
  t.density = d;
  t.weight_power = w;
  t.transform = tr;
  t.series = series;
  return t;
}

Form scaled(Form f, double c) {
  for (auto& t : f) t.coefficient *= c;
  return f;
}

Form operator+(Form a, const Form& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

// K series copies of a term, indices 1..K.
Form series(const Term& t, int K) {
  Form out;
  for (int i = 1; i <= K; ++i) {
    Term s = t;
    s.series = i;
    out.push_back(s);
  }
  return out;
}

ProfileTransform power(double p) { return {p, 0.0, 0, false}; }
ProfileTransform laplacian(int j) { return {0.0, 0.0, j, false}; }
// g = r^{(N-4)/2 - k} f as a function of r alone.
ProfileTransform g_of(int N) { return {0.5 * (N - 4.0), -1.0, 0, true}; }

// int r^{2k+3} g''^2, int r^{2k+1} g'^2, int r^{2k-1} g^2 (times c_N).
Term T2(int N, int k, double c = 1.0) { return term(c, Density::SecondDerivative, 2.0 * k - N + 4.0, g_of(N)); }
Term T1(int N, int k, double c = 1.0) { return term(c, Density::RadialDerivative, 2.0 * k - N + 2.0, g_of(N)); }
Term T0(int N, int k, double c = 1.0) { return term(c, Density::Value, 2.0 * k - N, g_of(N)); }

double X1(const RadialPoint& p) { return 1.0 / (1.0 - std::min(0.0, p.t)); }

struct Sides {
  FormBuilder lhs, rhs;
  std::optional<TestFunction> fn;  // defaults to the member's u
};

struct Params {
  int N = 0;
  int K = 0;
  double mfrac = 0.0, afrac = 1.0;
};

using Builder = std::function<Sides(const SuiteMember&, const Params&)>;

struct Check {
  RegistryEntry entry;
  Builder build;
};

FormBuilder fixed(Form f) {
  return [f = std::move(f)](int) { return f; };
}

double weight_m(const Params& p) { return p.mfrac * 0.5 * (p.N - 4.0); }

Form rellich_form(int N) {
  return {term(1.0, Density::Laplacian, 0.0), term(-rellich_constant(N), Density::Value, -4.0)};
}
Form gradient_rellich_form(int N) {
  return {term(1.0, Density::Laplacian, 0.0), term(-gradient_rellich_constant(N), Density::Gradient, -2.0)};
}
Form v_gradient(int N) { return {term(1.0, Density::Gradient, 2.0 - N, power(0.5 * (N - 4.0)))}; }
Form v_laplacian(int N) { return {term(1.0, Density::Laplacian, 4.0 - N, power(0.5 * (N - 4.0)))}; }
Form v_radial(int N) { return {term(1.0, Density::RadialDerivative, 2.0 - N, power(0.5 * (N - 4.0)))}; }

Form higher_order_side(const HigherOrderExpansion& e, int K, bool lhs) {
  Form out;
  if (lhs) {
    out.push_back(term(1.0, e.lhs_gradient ? Density::Gradient : Density::Value, 0.0, laplacian(e.lhs_laplacian_power)));
    return out;
  }
  for (const auto& t : e.terms) {
    const Term base =
        term(t.coefficient, t.gradient ? Density::Gradient : Density::Value, -t.weight_power, laplacian(t.laplacian_power));
    if (t.series)
      out = out + series(base, K);
    else
      out.push_back(base);
  }
  return out;
}

Sides higher_order(const SuiteMember& s, const Params& p, HigherOrderVariant v) {
  if (p.N != 9 && p.N != 30) throw Skip{"higher order checks run at N = 9 and N = 30 only"};
  if (!s.smoother) throw Skip{"spline profiles are only C^2; polyharmonic order 2 needs four derivatives"};
  const HigherOrderExpansion e = higher_order_coefficients(p.N, 2, 1, v);
  return {fixed(higher_order_side(e, p.K, true)), fixed(higher_order_side(e, p.K, false)), *s.smoother};
}

std::vector<Check> identities() {
  std::vector<Check> c;
  auto add = [&](std::string id, std::string desc, Builder b) {
    c.push_back({{std::move(id), CheckKind::Identity, std::move(desc)}, std::move(b)});
  };
  add("weighted_green", "int B|x|^{-a}|grad u|^2 = -int B|x|^{-a} u Lap u + 1/2 int u^2 Lap(B|x|^{-a}), B = 1+|x|^2, a < N-2",
      [](const SuiteMember&, const Params& p) {
        const double n = p.N, a = -1.0 + p.afrac * (n - 2.0) * 0.999;
        Form l = {term(1.0, Density::Gradient, -a), term(1.0, Density::Gradient, 2.0 - a)};
        Form r = {term(-1.0, Density::ValueLaplacian, -a), term(-1.0, Density::ValueLaplacian, 2.0 - a),
                  term(0.5 * a * (a + 2.0 - n), Density::Value, -a - 2.0),
                  term(0.5 * (2.0 - a) * (n - a), Density::Value, -a)};
        return Sides{fixed(l), fixed(r), {}};
      });
  add("power_substitution", "int |Lap u|^2 through v = |x|^a u, 0 < a <= (N-4)/2",
      [](const SuiteMember&, const Params& p) {
        const double n = p.N, a = p.afrac * 0.5 * (n - 4.0);
        const ProfileTransform v = power(a);
        Form r = {term(1.0, Density::Laplacian, -2.0 * a, v),
                  term(-4.0 * a * (a + 2.0), Density::RadialDerivative, -2.0 * a - 2.0, v),
                  term(2.0 * a * (a + 2.0), Density::Gradient, -2.0 * a - 2.0, v),
                  term(a * (a + 2.0) * (a + 2.0 - n) * (a + 4.0 - n), Density::Value, -2.0 * a - 4.0, v)};
        return Sides{fixed({term(1.0, Density::Laplacian, 0.0)}), fixed(r), {}};
      });
  add("v_gradient_split", "int |grad u|^2/|x|^2 = int |x|^{2-N}|grad v|^2 + ((N-4)/2)^2 int |x|^{-N} v^2",
      [](const SuiteMember&, const Params& p) {
        const double n = p.N, al = 0.5 * (n - 4.0);
        Form r = v_gradient(p.N) + Form{term(al * al, Density::Value, -n, power(al))};
        return Sides{fixed({term(1.0, Density::Gradient, -2.0)}), fixed(r), {}};
      });
  add("v_rellich_reduction", "Rellich remainder in terms of v = |x|^{(N-4)/2} u", [](const SuiteMember&, const Params& p) {
    const double n = p.N;
    Form r = v_laplacian(p.N) + scaled(v_radial(p.N), -n * (n - 4.0)) + scaled(v_gradient(p.N), n * (n - 4.0) / 2.0);
    return Sides{fixed(rellich_form(p.N)), fixed(r), {}};
  });
  add("v_gradient_rellich_reduction", "gradient Rellich remainder in terms of v = |x|^{(N-4)/2} u",
      [](const SuiteMember&, const Params& p) {
        const double n = p.N;
        Form r = v_laplacian(p.N) + scaled(v_radial(p.N), -n * (n - 4.0)) + scaled(v_gradient(p.N), n * (n - 8.0) / 4.0);
        return Sides{fixed(gradient_rellich_form(p.N)), fixed(r), {}};
      });
  add("mode_laplacian_g", "int |Lap u_k|^2 in terms of g = r^{(N-4)/2-k} f_k", [](const SuiteMember&, const Params& p) {
    const int N = p.N;
    const double n = N;
    return Sides{fixed({term(1.0, Density::Laplacian, 0.0)}), [N, n](int k) {
                   const double c = mode_eigenvalue(k, N);
                   return Form{T2(N, k), T1(N, k, n * (n - 4.0) / 2.0 + 2.0 * k * (n - 3.0) + 3.0),
                               T0(N, k, rellich_constant(N) + n * (n - 4.0) / 2.0 * (c + k * k))};
                 },
                 {}};
  });
  add("mode_weighted_gradient_g", "int |grad u_k|^2/|x|^2 in terms of g", [](const SuiteMember&, const Params& p) {
    const int N = p.N;
    const double al = 0.5 * (N - 4.0);
    return Sides{fixed({term(1.0, Density::Gradient, -2.0)}),
                 [N, al](int k) { return Form{T1(N, k), T0(N, k, al * al + k * (N - 2.0))}; }, {}};
  });
  add("mode_rellich_remainder_g", "Rellich remainder of u_k in terms of g", [](const SuiteMember&, const Params& p) {
    const int N = p.N;
    const double n = N;
    return Sides{fixed(rellich_form(N)), [N, n](int k) {
                   const double c = mode_eigenvalue(k, N);
                   return Form{T2(N, k), T1(N, k, n * (n - 4.0) / 2.0 + 2.0 * k * (n - 3.0) + 3.0),
                               T0(N, k, n * (n - 4.0) / 2.0 * (c + k * k))};
                 },
                 {}};
  });
  add("mode_gradient_rellich_remainder_g", "gradient Rellich remainder of u_k in terms of g",
      [](const SuiteMember&, const Params& p) {
        const int N = p.N;
        const double n = N;
        return Sides{fixed(gradient_rellich_form(N)), [N, n](int k) {
                       const double c = mode_eigenvalue(k, N);
                       return Form{T2(N, k), T1(N, k, (2.0 * k + n - 1.0) * (n - 3.0) - n * (3.0 * n - 8.0) / 4.0),
                                   T0(N, k, n * (3.0 * n - 8.0) / 4.0 * k * k + n * (n - 8.0) / 4.0 * c)};
                     },
                     {}};
      });
  add("mode_v_laplacian_g", "int |x|^{4-N}|Lap v_k|^2 in terms of g", [](const SuiteMember&, const Params& p) {
    const int N = p.N;
    return Sides{fixed(v_laplacian(N)),
                 [N](int k) { return Form{T2(N, k), T1(N, k, (2.0 * k + N - 1.0) * (N - 3.0))}; }, {}};
  });
  add("mode_v_gradient_g", "int |x|^{2-N}|grad v_k|^2 in terms of g", [](const SuiteMember&, const Params& p) {
    const int N = p.N;
    return Sides{fixed(v_gradient(N)), [N](int k) { return Form{T1(N, k), T0(N, k, k * (N - 2.0))}; }, {}};
  });
  add("mode_v_radial_derivative_g", "int |x|^{-N}(x.grad v_k)^2 in terms of g", [](const SuiteMember&, const Params& p) {
    const int N = p.N;
    return Sides{fixed(v_radial(N)), [N](int k) { return Form{T1(N, k), T0(N, k, -1.0 * k * k)}; }, {}};
  });
  add("mode_potential_gradient_g", "int V|grad u_k|^2/|x|^2 in terms of g, V = (N^2 + X_1^2)/4 + |x|^2",
      [](const SuiteMember&, const Params& p) {
        const int N = p.N;
        const double al = 0.5 * (N - 4.0);
        auto V = [N](const RadialPoint& q) {
          const double x = X1(q);
          return 0.25 * (N * N + x * x) + q.r * q.r;
        };
        // r V'(r) = X_1^3/2 + 2 r^2
        auto rVp = [](const RadialPoint& q) {
          const double x = X1(q);
          return 0.5 * x * x * x + 2.0 * q.r * q.r;
        };
        Term l = term(1.0, Density::Gradient, -2.0);
        l.extra = V;
        return Sides{fixed({l}), [N, al, V, rVp](int k) {
                       Term a = T1(N, k), b = T0(N, k, al * al + k * (N - 2.0)), c = T0(N, k, al - k);
                       a.extra = V;
                       b.extra = V;
                       c.extra = rVp;
                       return Form{a, b, c};
                     },
                     {}};
      });
  add("mode_weighted_laplacian_f", "int |Lap u_k|^2/|x|^{2m} in terms of f_k, f_k' and f_k''",
      [](const SuiteMember&, const Params& p) {
        const int N = p.N;
        const double m = weight_m(p), n = N;
        return Sides{fixed({term(1.0, Density::Laplacian, -2.0 * m)}), [N, n, m](int k) {
                       const double c = mode_eigenvalue(k, N);
                       return Form{term(1.0, Density::SecondDerivative, -2.0 * m),
                                   term((n - 1.0) * (2.0 * m + 1.0) + 2.0 * c, Density::RadialDerivative, -2.0 - 2.0 * m),
                                   term(c * (c + (n - 4.0 - 2.0 * m) * (2.0 * m + 2.0)), Density::Value, -4.0 - 2.0 * m)};
                     },
                     {}};
      });
  add("mode_weighted_gradient_f", "int |grad u_k|^2/|x|^{2m+2} in terms of f_k and f_k'",
      [](const SuiteMember&, const Params& p) {
        const int N = p.N;
        const double m = weight_m(p);
        return Sides{fixed({term(1.0, Density::Gradient, -2.0 * m - 2.0)}), [N, m](int k) {
                       return Form{term(1.0, Density::RadialDerivative, -2.0 - 2.0 * m),
                                   term(mode_eigenvalue(k, N), Density::Value, -4.0 - 2.0 * m)};
                     },
                     {}};
      });
  add("weighted_power_substitution", "int |Lap u|^2/|x|^{2m} through v = |x|^a u, 0 < a <= (N-4-2m)/2",
      [](const SuiteMember&, const Params& p) {
        const double n = p.N, m = weight_m(p), a = p.afrac * 0.5 * (n - 4.0 - 2.0 * m);
        const ProfileTransform v = power(a);
        const double c0 = a * a * (a + 2.0 - n) * (a + 2.0 - n) - 2.0 * a * (a + 2.0 - n) * (m + 1.0) * (n - 4.0 - 2.0 * m - 2.0 * a);
        Form r = {term(1.0, Density::Laplacian, -2.0 * a - 2.0 * m, v),
                  term(-4.0 * a * (2.0 * m + 2.0 + a), Density::RadialDerivative, -2.0 * a - 2.0 - 2.0 * m, v),
                  term(2.0 * a * (a + 2.0 + 2.0 * m), Density::Gradient, -2.0 * a - 2.0 - 2.0 * m, v),
                  term(c0, Density::Value, -2.0 * a - 4.0 - 2.0 * m, v)};
        return Sides{fixed({term(1.0, Density::Laplacian, -2.0 * m)}), fixed(r), {}};
      });
  add("weighted_v_gradient_split", "int |grad u|^2/|x|^{2m+2} through v = |x|^{(N-4-2m)/2} u",
      [](const SuiteMember&, const Params& p) {
        const double n = p.N, m = weight_m(p), b = 0.5 * (n - 4.0 - 2.0 * m);
        Form r = {term(1.0, Density::Gradient, 2.0 - n, power(b)), term(b * b, Density::Value, -n, power(b))};
        return Sides{fixed({term(1.0, Density::Gradient, -2.0 * m - 2.0)}), fixed(r), {}};
      });
  add("weighted_v_rellich_reduction", "weighted Rellich remainder through v = |x|^{(N-4-2m)/2} u",
      [](const SuiteMember&, const Params& p) {
        const double n = p.N, m = weight_m(p), b = 0.5 * (n - 4.0 - 2.0 * m);
        const double sp = (n + 2.0 * m) * (n - 4.0 - 2.0 * m);
        Form l = {term(1.0, Density::Laplacian, -2.0 * m), term(-sp * sp / 16.0, Density::Value, -2.0 * m - 4.0)};
        Form r = {term(1.0, Density::Laplacian, 4.0 - n, power(b)), term(-sp, Density::RadialDerivative, 2.0 - n, power(b)),
                  term(0.5 * sp, Density::Gradient, 2.0 - n, power(b))};
        return Sides{fixed(l), fixed(r), {}};
      });
  return c;
}

std::vector<Check> inequalities() {
  std::vector<Check> c;
  auto add = [&](std::string id, std::string desc, Builder b) {
    c.push_back({{std::move(id), CheckKind::Inequality, std::move(desc)}, std::move(b)});
  };
  auto simple = [](std::function<Form(const Params&)> l, std::function<Form(const Params&)> r) {
    return [l, r](const SuiteMember&, const Params& p) { return Sides{fixed(l(p)), fixed(r(p)), {}}; };
  };
  add("hardy_improved", "int |grad u|^2 >= ((N-2)/2)^2 int u^2/|x|^2 + 1/4 sum_i int u^2/|x|^2 X_1^2...X_i^2",
      simple([](const Params&) { return Form{term(1.0, Density::Gradient, 0.0)}; },
             [](const Params& p) {
               return Form{term(hardy_constant(p.N), Density::Value, -2.0)} +
                      series(term(0.25, Density::Value, -2.0), p.K);
             }));
  add("hardy_weighted_improved", "weighted improved Hardy inequality, 0 <= m < (N-2)/2",
      [](const SuiteMember&, const Params& p) {
        const double m = p.mfrac * 0.5 * (p.N - 2.0), h = 0.5 * (p.N - 2.0 * m - 2.0);
        Form r = Form{term(h * h, Density::Value, -2.0 * m - 2.0)} + series(term(0.25, Density::Value, -2.0 * m - 2.0), p.K);
        return Sides{fixed({term(1.0, Density::Gradient, -2.0 * m)}), fixed(r), {}};
      });
  add("rellich", "int |Lap u|^2 >= (N(N-4)/4)^2 int u^2/|x|^4",
      simple([](const Params&) { return Form{term(1.0, Density::Laplacian, 0.0)}; },
             [](const Params& p) { return Form{term(rellich_constant(p.N), Density::Value, -4.0)}; }));
  add("gradient_rellich", "int |Lap u|^2 >= N^2/4 int |grad u|^2/|x|^2",
      simple([](const Params&) { return Form{term(1.0, Density::Laplacian, 0.0)}; },
             [](const Params& p) { return Form{term(gradient_rellich_constant(p.N), Density::Gradient, -2.0)}; }));
  add("hardy_g_second", "int r^{2k+3} g''^2 >= (k+1)^2 int r^{2k+1} g'^2 on each mode", [](const SuiteMember&, const Params& p) {
    const int N = p.N;
    return Sides{[N](int k) { return Form{T2(N, k)}; }, [N](int k) { return Form{T1(N, k, (k + 1.0) * (k + 1.0))}; }, {}};
  });
  add("hardy_g_first", "int r^{2k+1} g'^2 >= k^2 int r^{2k-1} g^2 on each mode", [](const SuiteMember&, const Params& p) {
    const int N = p.N;
    return Sides{[N](int k) { return Form{T1(N, k)}; }, [N](int k) { return Form{T0(N, k, 1.0 * k * k)}; }, {}};
  });
  auto comparison = [&](std::string id, Comparison cmp, std::function<Form(int)> l, std::function<Form(int)> r) {
    add(std::move(id), std::string("sharp comparison ") + comparison_name(cmp), [cmp, l, r](const SuiteMember&, const Params& p) {
      return Sides{fixed(l(p.N)), fixed(scaled(r(p.N), comparison_constant(cmp, p.N))), {}};
    });
  };
  comparison("rellich_v_gradient", Comparison::RellichOverVGradient, rellich_form, v_gradient);
  comparison("rellich_v_laplacian", Comparison::RellichOverVLaplacian, rellich_form, v_laplacian);
  comparison("gradient_rellich_v_gradient", Comparison::GradientRellichOverVGradient, gradient_rellich_form, v_gradient);
  comparison("gradient_rellich_v_laplacian", Comparison::GradientRellichOverVLaplacian, gradient_rellich_form,
             v_laplacian);
  comparison("v_laplacian_radial", Comparison::VLaplacianOverRadialExcess, v_laplacian,
             [](int N) { return v_radial(N) + scaled(v_gradient(N), -0.5); });
  add("v_laplacian_lower", "int |x|^{4-N}|Lap v|^2 >= N(N-4) int |x|^{-N}(x.grad v)^2 + 4 int |x|^{2-N}|grad v|^2",
      simple([](const Params& p) { return v_laplacian(p.N); },
             [](const Params& p) { return scaled(v_radial(p.N), p.N * (p.N - 4.0)) + scaled(v_gradient(p.N), 4.0); }));
  add("v_radial_vs_full_gradient",
      "2(N-2)^2 (int |x|^{-N}(x.grad v)^2 - 1/2 int |x|^{2-N}|grad v|^2) <= N(N-4) int |x|^{-N}(x.grad v)^2 + 4 int |x|^{2-N}|grad v|^2",
      simple([](const Params& p) { return scaled(v_radial(p.N), p.N * (p.N - 4.0)) + scaled(v_gradient(p.N), 4.0); },
             [](const Params& p) {
               const double c = 2.0 * (p.N - 2.0) * (p.N - 2.0);
               return scaled(v_radial(p.N), c) + scaled(v_gradient(p.N), -0.5 * c);
             }));
  auto radial_split = [&](std::string id, std::string desc, bool gradient) {
    add(std::move(id), std::move(desc), [gradient](const SuiteMember& s, const Params& p) {
      const double n = p.N;
      const double C = gradient ? 4.0 * (n - 1.0) * (n * n - 4.0 * n - 4.0) / ((n * n - 4.0) * (n * n - 4.0))
                                : 8.0 * (n - 1.0) * (n * n - 2.0 * n - 2.0) / ((n * n - 4.0) * (n * n - 4.0));
      // I[u] - I[u_0] = I[u - u_0] since modes decouple; u_0 is the k = 0 component.
      Form l = gradient ? gradient_rellich_form(p.N) : rellich_form(p.N);
      return Sides{fixed(l), fixed({term(C, Density::Laplacian, 0.0)}), s.u.nonradial_part()};
    });
  };
  radial_split("rellich_radial_split", "I[u] >= I[u_0] + C_N int |Lap(u - u_0)|^2, u_0 the spherical mean", false);
  radial_split("gradient_rellich_radial_split", "II[u] >= II[u_0] + C_N int |Lap(u - u_0)|^2", true);
  add("rellich_improved", "I[u] >= (1 + N(N-4)/8) sum_i int u^2/|x|^4 X_1^2...X_i^2",
      simple([](const Params& p) { return rellich_form(p.N); },
             [](const Params& p) { return series(term(sigma_bar(0.0, p.N), Density::Value, -4.0), p.K); }));
  add("gradient_rellich_improved", "II[u] >= 1/4 sum_i int |grad u|^2/|x|^2 X_1^2...X_i^2",
      simple([](const Params& p) { return gradient_rellich_form(p.N); },
             [](const Params& p) { return series(term(0.25, Density::Gradient, -2.0), p.K); }));
  add("weighted_rellich", "int |Lap u|^2/|x|^{2m} >= sigma(m) int u^2/|x|^{2m+4}", [](const SuiteMember&, const Params& p) {
    const double m = weight_m(p);
    return Sides{fixed({term(1.0, Density::Laplacian, -2.0 * m)}),
                 fixed({term(sigma(m, p.N), Density::Value, -2.0 * m - 4.0)}), {}};
  });
  add("weighted_rellich_improved", "weighted Rellich plus sigma_bar(m) times the series", [](const SuiteMember&, const Params& p) {
    const double m = weight_m(p);
    Form r = Form{term(sigma(m, p.N), Density::Value, -2.0 * m - 4.0)} +
             series(term(sigma_bar(m, p.N), Density::Value, -2.0 * m - 4.0), p.K);
    return Sides{fixed({term(1.0, Density::Laplacian, -2.0 * m)}), fixed(r), {}};
  });
  add("weighted_rellich_v_gradient", "weighted Rellich remainder >= A(N,m) int |x|^{2-N}|grad v|^2, v = |x|^{(N-4-2m)/2} u",
      [](const SuiteMember&, const Params& p) {
        const double m = weight_m(p), n = p.N, b = 0.5 * (n - 4.0 - 2.0 * m);
        Form l = {term(1.0, Density::Laplacian, -2.0 * m), term(-sigma(m, p.N), Density::Value, -2.0 * m - 4.0)};
        return Sides{fixed(l), fixed({term(reduction_constant_A(p.N, m), Density::Gradient, 2.0 - n, power(b))}), {}};
      });
  add("weighted_gradient_rellich", "int |Lap u|^2/|x|^{2m} >= a_{m,N} int |grad u|^2/|x|^{2m+2}",
      [](const SuiteMember&, const Params& p) {
        const double m = weight_m(p);
        return Sides{fixed({term(1.0, Density::Laplacian, -2.0 * m)}),
                     fixed({term(a_mn(p.N, m).value, Density::Gradient, -2.0 * m - 2.0)}), {}};
      });
  add("weighted_gradient_rellich_improved", "((N+2m)/2)^2 weighted gradient Rellich plus 1/4 series, 0 <= m <= m*",
      [](const SuiteMember&, const Params& p) {
        const double m = p.mfrac * m_star(p.N), h = 0.5 * (p.N + 2.0 * m);
        Form r = Form{term(h * h, Density::Gradient, -2.0 * m - 2.0)} + series(term(0.25, Density::Gradient, -2.0 * m - 2.0), p.K);
        return Sides{fixed({term(1.0, Density::Laplacian, -2.0 * m)}), fixed(r), {}};
      });
  add("higher_order_rellich", "improved Rellich chain for (Lap^2 u)^2 with one weighted step",
      [](const SuiteMember& s, const Params& p) { return higher_order(s, p, HigherOrderVariant::Laplacian); });
  add("higher_order_gradient", "improved Hardy-Rellich chain for |grad Lap^2 u|^2 with one weighted step",
      [](const SuiteMember& s, const Params& p) { return higher_order(s, p, HigherOrderVariant::Gradient); });
  add("higher_order_mixed", "improved gradient Rellich chain for (Lap^2 u)^2 with one step",
      [](const SuiteMember& s, const Params& p) { return higher_order(s, p, HigherOrderVariant::Mixed); });
  return c;
}

const std::vector<Check>& all_checks() {
  static const std::vector<Check> checks = [] {
    std::vector<Check> c = identities();
    for (auto& x : inequalities()) c.push_back(std::move(x));
    return c;
  }();
  return checks;
}

const Check& find_check(const std::string& id, CheckKind kind) {
  for (const auto& c : all_checks())
    if (c.entry.id == id) {
      if (c.entry.kind != kind)
        throw DomainError("target '" + id + "' is " + (kind == CheckKind::Identity ? "not an identity" : "not an inequality"));
      return c;
    }
  throw DomainError("unknown target '" + id + "'");
}

// Sobolev targets are inequalities handled outside the form machinery.
bool is_sobolev_target(const std::string& id) { return id == "rellich_sobolev" || id == "gradient_rellich_sobolev"; }

CaseResult evaluate_case(const Check& check, const SuiteMember& s, int K, const QuadratureSpec& quad, double tol) {
  CaseResult r;
  r.index = s.index;
  r.description = s.description;
  try {
    const Params p{s.u.N(), K, s.m_fraction, s.a_fraction};
    const Sides sides = check.build(s, p);
    const TestFunction& fn = sides.fn ? *sides.fn : s.u;
    const QuadratureResult l = integrate_form(fn, sides.lhs, quad);
    const QuadratureResult rr = integrate_form(fn, sides.rhs, quad);
    r.lhs = l.value;
    r.rhs = rr.value;
    r.converged = l.converged && rr.converged;
    if (check.entry.kind == CheckKind::Identity) {
      r.value = std::abs(l.value - rr.value) / (std::abs(l.value) + std::abs(rr.value) + 1e-300);
      if (l.value == 0.0 && rr.value == 0.0) r.value = 0.0;
      r.pass = r.value < tol;
    } else {
      r.value = l.value - rr.value;
      r.pass = r.value >= -tol;
    }
    r.pass = r.pass && std::isfinite(r.value);
  } catch (const Skip& e) {
    r.skipped = true;
    r.reason = e.reason;
  } catch (const DomainError& e) {
    r.skipped = true;
    r.reason = e.what();
  }
  return r;
}

void finish(CheckReport& rep) {
  rep.pass = true;
  for (size_t i = 0; i < rep.cases.size(); ++i) {
    const CaseResult& c = rep.cases[i];
    if (c.skipped) continue;
    rep.pass = rep.pass && c.pass;
    if (!rep.worst_case) {
      rep.worst_case = i;
      continue;
    }
    const CaseResult& w = rep.cases[*rep.worst_case];
    const bool worse = rep.kind == CheckKind::Identity ? c.value > w.value : c.value < w.value;
    if (worse || !std::isfinite(c.value)) rep.worst_case = i;
  }
}

CheckReport sobolev_report(const std::string& target, const std::vector<SuiteMember>& suite, const QuadratureSpec& quad,
                           double tol) {
  CheckReport rep;
  rep.target = target;
  rep.kind = CheckKind::Inequality;
  rep.tolerance = tol;
  const SobolevKind kind = target == "rellich_sobolev" ? SobolevKind::Laplacian : SobolevKind::Gradient;
  for (const auto& s : suite) {
    CaseResult r;
    r.index = s.index;
    r.description = s.description;
    try {
      const SobolevValue v = sobolev_quotient(kind, s.u, quad);
      r.lhs = v.remainder;
      r.rhs = v.sobolev_integral;
      r.value = v.quotient;
      r.converged = v.converged;
      // The improved inequality needs a positive constant, so the quotient must be strictly positive.
      r.pass = v.quotient > 0.0 && std::isfinite(v.quotient);
    } catch (const DomainError& e) {
      r.skipped = true;
      r.reason = e.what();
    }
    rep.cases.push_back(r);
  }
  finish(rep);
  return rep;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

const std::vector<RegistryEntry>& registry() {
  static const std::vector<RegistryEntry> entries = [] {
    std::vector<RegistryEntry> e;
    for (const auto& c : all_checks()) e.push_back(c.entry);
    e.push_back({"rellich_sobolev", CheckKind::Inequality,
                 "Rellich remainder over (int |u|^{2N/(N-4)} X_1^{2(N-2)/(N-4)})^{(N-4)/N} is positive"});
    e.push_back({"gradient_rellich_sobolev", CheckKind::Inequality,
                 "gradient Rellich remainder over (int |grad u|^{2N/(N-2)} X_1^{2(N-1)/(N-2)})^{(N-2)/N} is positive"});
    return e;
  }();
  return entries;
}

std::optional<RegistryEntry> find_target(const std::string& id) {
  for (const auto& e : registry())
    if (e.id == id) return e;
  return std::nullopt;
}

std::vector<std::string> targets_of(CheckKind kind) {
  std::vector<std::string> out;
  for (const auto& e : registry())
    if (e.kind == kind) out.push_back(e.id);
  return out;
}

CheckReport check_identity(const std::string& target, const std::vector<SuiteMember>& suite, const QuadratureSpec& quad,
                           double tolerance) {
  const Check& c = find_check(target, CheckKind::Identity);
  CheckReport rep;
  rep.target = target;
  rep.kind = CheckKind::Identity;
  rep.tolerance = tolerance;
  for (const auto& s : suite) rep.cases.push_back(evaluate_case(c, s, 0, quad, tolerance));
  finish(rep);
  return rep;
}

CheckReport check_inequality(const std::string& target, const std::vector<SuiteMember>& suite, int K,
                             const QuadratureSpec& quad, double tolerance) {
  if (K < 1) throw DomainError("check_inequality: need K >= 1 series terms");
  if (is_sobolev_target(target)) {
    CheckReport rep = sobolev_report(target, suite, quad, tolerance);
    rep.series_terms = K;
    return rep;
  }
  const Check& c = find_check(target, CheckKind::Inequality);
  CheckReport rep;
  rep.target = target;
  rep.kind = CheckKind::Inequality;
  rep.tolerance = tolerance;
  rep.series_terms = K;
  for (const auto& s : suite) rep.cases.push_back(evaluate_case(c, s, K, quad, tolerance));
  finish(rep);
  return rep;
}

std::vector<CheckReport> run_checks(const std::vector<std::string>& targets, const std::vector<SuiteMember>& suite, int K,
                                    const QuadratureSpec& quad) {
  for (const auto& t : targets)
    if (!find_target(t)) throw DomainError("unknown target '" + t + "'");
  std::vector<std::future<CheckReport>> jobs;
  for (const auto& t : targets) {
    const CheckKind kind = find_target(t)->kind;
    jobs.push_back(std::async(std::launch::async, [&suite, t, kind, K, quad] {
      return kind == CheckKind::Identity ? check_identity(t, suite, quad) : check_inequality(t, suite, K, quad);
    }));
  }
  std::vector<CheckReport> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

std::string reports_to_json(const std::vector<CheckReport>& reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    nlohmann::ordered_json j;
    j["target"] = r.target;
    j["kind"] = r.kind == CheckKind::Identity ? "identity" : "inequality";
    j["tolerance"] = r.tolerance;
    if (r.kind == CheckKind::Inequality) j["series_terms"] = r.series_terms;
    j["pass"] = r.pass;
    if (r.worst_case) j["worst_case"] = r.cases[*r.worst_case].index;
    nlohmann::ordered_json cases = nlohmann::ordered_json::array();
    for (const auto& c : r.cases) {
      nlohmann::ordered_json x;
      x["case"] = c.index;
      if (c.skipped) {
        x["skipped"] = true;
        x["reason"] = c.reason;
      } else {
        x["lhs"] = c.lhs;
        x["rhs"] = c.rhs;
        x[r.kind == CheckKind::Identity ? "residual" : "slack"] = c.value;
        x["pass"] = c.pass;
        x["converged"] = c.converged;
      }
      cases.push_back(x);
    }
    j["cases"] = cases;
    arr.push_back(j);
  }
  return arr.dump(2) + "\n";
}

std::string reports_to_csv(const std::vector<CheckReport>& reports) {
  std::ostringstream os;
  os << "target,kind,case,lhs,rhs,value,pass,skipped,reason\n";
  for (const auto& r : reports) {
    for (const auto& c : r.cases) {
      os << r.target << ',' << (r.kind == CheckKind::Identity ? "identity" : "inequality") << ',' << c.index << ',';
      if (c.skipped)
        os << ",,,," << "1," << csv_escape(c.reason) << '\n';
      else
        os << fmt17(c.lhs) << ',' << fmt17(c.rhs) << ',' << fmt17(c.value) << ',' << (c.pass ? 1 : 0) << ",0,\n";
    }
  }
  return os.str();
}

Admissibility admissibility(const std::function<double(double)>& potential, int N, PotentialClass which,
                            const QuadratureSpec& quad, double growth_factor) {
  if (N < 3) throw DomainError("admissibility: need N >= 3");
  const double n = N;
  const double p = which == PotentialClass::Hardy ? 0.5 * n : 0.25 * n;
  const double e = which == PotentialClass::Hardy ? n - 1.0 : 0.5 * n - 1.0;  // X_1^{-e} = (1+s)^e
  const double log_cn = log_sphere_area(N);
  bool bad = false;
  auto g = [&](double s) {
    const double r = std::exp(-s);
    const double V = potential(r);
    if (V < 0.0 || std::isnan(V)) {
      bad = true;
      return 0.0;
    }
    if (V == 0.0) return 0.0;
    return std::exp(log_cn - n * s + p * std::log(V) + e * std::log1p(s));
  };
  Admissibility out;
  double total = 0.0, first = 0.0;
  int quiet = 0;
  const double step = std::log(2.0);
  for (int j = 1; j <= 1000; ++j) {
    const QuadratureResult piece = integrate(g, (j - 1) * step, j * step, quad);
    if (bad) throw DomainError("admissibility: the potential must be nonnegative");
    total += piece.value;
    out.partials.push_back(total);
    if (!std::isfinite(total)) {
      out.finite = false;
      out.value = total;
      return out;
    }
    if (first == 0.0 && total > 0.0) first = total;
    if (first > 0.0 && total > growth_factor * first) {
      out.finite = false;
      out.value = total;
      return out;
    }
    quiet = std::abs(piece.value) <= quad.rel_tol * std::abs(total) ? quiet + 1 : 0;
    if (quiet >= 3) {
      out.stabilized = true;
      break;
    }
  }
  out.finite = true;
  out.value = total;
  return out;
}

}  // namespace hr
