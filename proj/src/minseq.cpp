#include "hardy_rellich/minseq.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <future>
#include <sstream>

#include "hardy_rellich/errors.hpp"
#include "hardy_rellich/iterlog.hpp"

namespace hr {

namespace {

// S(x) = x^{n+1} sum_{j<=n} C(n+j, j) (1-x)^j, the C^n smoothstep with S(0) = 0, S(1) = 1.
Jet smoothstep(const Jet& x, int n) {
  const Jet y = 1.0 - x;
  Jet sum(x.order(), 0.0);
  Jet yp(x.order(), 1.0);
  double binom = 1.0;
  for (int j = 0; j <= n; ++j) {
    sum += yp * binom;
    yp = yp * y;
    binom = binom * (n + j + 1) / (j + 1);
  }
  return pow_int(x, n + 1) * sum;
}

void check_cutoff(const CutoffSpec& c) {
  if (!(c.inner > 0.0) || !(c.outer > c.inner) || c.outer > 1.0)
    throw DomainError("cutoff: need 0 < inner < outer <= 1");
  if (c.smoothness < 4) throw DomainError("cutoff: smoothness_order must be at least 4");
}

double critical_power(const MinSeqParams& p) { return -0.5 * (p.N - 4.0) + p.m + p.epsilon; }

}  // namespace

Jet cutoff_jet(const CutoffSpec& c, const RadialPoint& p, int order) {
  if (p.r <= c.inner) return Jet(order, 1.0);
  if (p.r >= c.outer) return Jet(order, 0.0);
  const Jet x = (c.outer - r_jet(p, order)) * (1.0 / (c.outer - c.inner));
  return smoothstep(x, c.smoothness);
}

double cutoff_value(const CutoffSpec& c, double r) {
  return cutoff_jet(c, {r, std::log(r)}, 0).value();
}

void validate(const MinSeqParams& p) {
  if (p.N < 5) throw DomainError("minimizing sequence: need N >= 5");
  if (!(p.m >= 0.0) || !(p.m < 0.5 * (p.N - 4.0))) throw DomainError("minimizing sequence: need 0 <= m < (N-4)/2");
  if (!(p.epsilon > 0.0) || !(p.epsilon < 1.0)) throw DomainError("minimizing sequence: need epsilon in (0, 1)");
  for (double a : p.a)
    if (!(a > 0.0) || !(a <= 1.0)) throw DomainError("minimizing sequence: need every a_i in (0, 1]");
  if (p.mode_k < 0) throw DomainError("minimizing sequence: mode index must be non-negative");
  check_cutoff(p.cutoff);
}

namespace {

RadialProfile log_profile(const MinSeqParams& p, double power) {
  ClosedForm s;
  s.power = power;
  s.origin_power = s.power;
  s.support = p.cutoff.outer;
  s.max_order = std::min(p.cutoff.smoothness, kMaxJetOrder);
  s.breakpoints = {p.cutoff.inner, p.cutoff.outer};
  std::ostringstream os;
  os << "r^" << s.power << " X-factors(" << p.a.size() << ") cutoff";
  s.description = os.str();
  std::vector<double> betas;
  for (double a : p.a) betas.push_back(0.5 * (-1.0 + a));
  // The X-factors enter as exp(L) with L = sum beta_i ln X_i. Its value is
  // carried in the log scale so nothing underflows deep in the origin layer.
  s.log_scale = [betas](const RadialPoint& pt) {
    double lx = -std::log1p(-pt.t), L = 0.0;
    for (size_t i = 0; i < betas.size(); ++i) {
      if (i > 0) lx = -std::log1p(-lx);
      L += betas[i] * lx;
    }
    return L;
  };
  const CutoffSpec cut = p.cutoff;
  s.G = [betas, cut](const RadialPoint& pt, int order) {
    // ln X_1 = -ln(1 - t), ln X_{i+1} = -ln(1 - ln X_i)
    Jet lx = -log(1.0 - Jet::variable(order, pt.t));
    Jet L(order, 0.0);
    for (size_t i = 0; i < betas.size(); ++i) {
      if (i > 0) lx = -log(1.0 - lx);
      L += lx * betas[i];
    }
    L[0] = 0.0;
    return cutoff_jet(cut, pt, order) * exp(L);
  };
  return make_closed_form(std::move(s));
}

}  // namespace

RadialProfile minimizer_profile(const MinSeqParams& p) {
  validate(p);
  return log_profile(p, critical_power(p));
}

TestFunction build_minimizer_v(const MinSeqParams& p) {
  validate(p);
  return TestFunction(p.N, {{p.mode_k, log_profile(p, p.epsilon)}}, 1.0, Side::V, p.m, true);
}

TestFunction build_minimizer(const MinSeqParams& p) {
  return TestFunction(p.N, {{p.mode_k, minimizer_profile(p)}}, 1.0, Side::U, 0.0, true);
}

double eta(const MinSeqParams& p, double r) {
  const double t = std::log(r);
  double prod = 1.0, sum = 0.0;
  for (size_t i = 0; i < p.a.size(); ++i) {
    prod *= iterated_log_from_log(static_cast<int>(i) + 1, t);
    sum += (-1.0 + p.a[i]) * prod;
  }
  return sum;
}

double eta_B(const MinSeqParams& p, double r) {
  const double t = std::log(r);
  const size_t K = p.a.size();
  std::vector<double> X(K);
  for (size_t i = 0; i < K; ++i) X[i] = iterated_log_from_log(static_cast<int>(i) + 1, t);
  // sum_i (-1+a_i) sum_{j<=i} X_1^2...X_j^2 X_{j+1}...X_i
  double B = 0.0;
  for (size_t i = 0; i < K; ++i) {
    for (size_t j = 0; j <= i; ++j) {
      double term = 1.0;
      for (size_t l = 0; l <= j; ++l) term *= X[l] * X[l];
      for (size_t l = j + 1; l <= i; ++l) term *= X[l];
      B += (-1.0 + p.a[i]) * term;
    }
  }
  return B;
}

const char* family_name(Family f) {
  switch (f) {
    case Family::Ray1: return "ray1";
    case Family::Ray2: return "ray2";
    case Family::T84: return "t84";
    case Family::E77: return "e77";
    case Family::Amn: return "amn";
    case Family::Cmp1: return "cmp1";
    case Family::Cmp2: return "cmp2";
    case Family::Cmp3: return "cmp3";
    case Family::Cmp4: return "cmp4";
    case Family::Cmp5: return "cmp5";
    case Family::Cmp6: return "cmp6";
  }
  return "?";
}

std::optional<Family> parse_family(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(Family::Cmp6); ++i) {
    const auto f = static_cast<Family>(i);
    if (s == family_name(f)) return f;
  }
  return std::nullopt;
}

bool uses_log_factors(Family f) {
  return f == Family::Ray1 || f == Family::Ray2 || f == Family::T84 || f == Family::E77 || f >= Family::Cmp1;
}

namespace {

Comparison comparison_of(Family f) { return static_cast<Comparison>(static_cast<int>(f) - static_cast<int>(Family::Cmp1)); }

bool is_comparison(Family f) { return f >= Family::Cmp1; }

void check_family_params(Family f, const MinSeqParams& p) {
  switch (f) {
    case Family::Ray1:
    case Family::Ray2:
      if (p.m != 0.0) throw DomainError(std::string(family_name(f)) + ": the unweighted family needs m = 0");
      break;
    case Family::E77:
      if (p.m > m_star(p.N) + 1e-12) throw DomainError("e77: need m <= m*(N)");
      break;
    default: break;
  }
  if (is_comparison(f) && p.m != 0.0) throw DomainError(std::string(family_name(f)) + ": needs m = 0");
  if (f != Family::Amn && p.mode_k != 0) throw DomainError(std::string(family_name(f)) + ": only the radial mode");
  if (uses_log_factors(f) && p.a.empty()) throw DomainError(std::string(family_name(f)) + ": needs at least one a_i");
}

Term term(double coef, Density d, double w, int series = 0, ProfileTransform tr = {}) {
  Term t;
  t.coefficient = coef;
  t.density = d;
  t.weight_power = w;
  t.series = series;
  t.transform = tr;
  return t;
}

Term euler_term(double coef, double a0, double a1, double a2, double w, int series = 0) {
  Term t = term(coef, Density::EulerSquare, w, series);
  t.euler = {a0, a1, a2};
  return t;
}

// Forms for the radial families act on g = |x|^{(N-4-2m)/2} u, where every
// functional has a cancellation-free ground-state representation:
//   T2 = int r^3 g''^2, T1 = int r g'^2, T0 = int g^2 / r   (times c_N).
// The Amn forms act on u directly.
struct QuotientForms {
  Form numerator, denominator;
  bool on_g = true;
};

QuotientForms quotient_forms(Family f, const MinSeqParams& p, int K) {
  const double n = p.N, m = p.m;
  const double al = 0.5 * (n - 4.0 - 2.0 * m);
  const Term T2 = term(1.0, Density::SecondDerivative, 4.0 - n);
  auto T1 = [n](double c) { return term(c, Density::RadialDerivative, 2.0 - n); };
  QuotientForms q;
  switch (f) {
    case Family::Ray1:
    case Family::T84: {
      // int |Lap u|^2/|x|^{2m} - sigma int u^2/|x|^{2m+4} = T2 + ((N-1)(N-3) - sigma'/2) T1
      const double sp = (n + 2.0 * m) * (n - 4.0 - 2.0 * m);
      q.numerator = {T2, T1((n - 1.0) * (n - 3.0) - 0.5 * sp)};
      const double A = sigma_bar(m, p.N);
      for (int i = 1; i < K; ++i) q.numerator.push_back(term(-A, Density::Value, -n, i));
      q.denominator = {term(1.0, Density::Value, -n, K)};
      break;
    }
    case Family::Ray2:
    case Family::E77: {
      // int |Lap u|^2/|x|^{2m} - ((N+2m)/2)^2 int |grad u|^2/|x|^{2m+2} = int r h'^2
      // with h = |x|^{(N-2-2m)/2} u' = (theta - al) g.
      q.numerator = {euler_term(1.0, 0.0, -al, 1.0, -n)};
      for (int i = 1; i < K; ++i) q.numerator.push_back(euler_term(-0.25, -al, 1.0, 0.0, -n, i));
      q.denominator = {euler_term(1.0, -al, 1.0, 0.0, -n, K)};
      break;
    }
    case Family::Amn:
      q.on_g = false;
      q.numerator = {term(1.0, Density::Laplacian, -2.0 * m)};
      q.denominator = {term(1.0, Density::Gradient, -2.0 * m - 2.0)};
      break;
    default: {
      const Form rellich = {T2, T1(0.5 * n * (n - 4.0) + 3.0)};
      const Form grad_rellich = {T2, T1(0.25 * (n - 2.0) * (n - 6.0))};
      const Form v_grad = {T1(1.0)};
      const Form v_lap = {T2, T1((n - 1.0) * (n - 3.0))};
      switch (comparison_of(f)) {
        case Comparison::RellichOverVGradient: q = {rellich, v_grad}; break;
        case Comparison::RellichOverVLaplacian: q = {rellich, v_lap}; break;
        case Comparison::GradientRellichOverVGradient: q = {grad_rellich, v_grad}; break;
        case Comparison::VLaplacianOverRadialExcess: q = {v_lap, {T1(0.5)}}; break;
        case Comparison::GradientRellichOverVLaplacian: q = {grad_rellich, v_lap}; break;
        case Comparison::LaplacianOverWeightedGradient:
          // |x|^{al+2} Lap u = (theta^2 + 2 theta - al(N-2-al)) g
          q = {{euler_term(1.0, -al * (n - 2.0 - al), 2.0, 1.0, -n)}, {euler_term(1.0, -al, 1.0, 0.0, -n)}};
          break;
      }
    }
  }
  return q;
}

}  // namespace

double theoretical_constant(Family f, const MinSeqParams& p) {
  switch (f) {
    case Family::Ray1:
    case Family::T84: return sigma_bar(p.m, p.N);
    case Family::Ray2:
    case Family::E77: return 0.25;
    case Family::Amn: return mode_quotient(p.mode_k, p.N, p.m);
    default: return comparison_constant(comparison_of(f), p.N);
  }
}

QuotientValue rayleigh_quotient(Family f, const MinSeqParams& p, int K_series, const QuadratureSpec& quad) {
  validate(p);
  check_family_params(f, p);
  if (uses_log_factors(f)) {
    if (K_series < 1) throw DomainError("rayleigh_quotient: K_series must be at least 1");
    if (static_cast<int>(p.a.size()) != K_series)
      throw DomainError("rayleigh_quotient: the number of a_i must equal K_series");
  }
  MinSeqParams q = p;
  if (!uses_log_factors(f)) q.a.clear();
  const QuotientForms forms = quotient_forms(f, q, K_series);
  const TestFunction u = forms.on_g ? build_minimizer_v(q) : build_minimizer(q);
  const QuadratureResult num = integrate_form(u, forms.numerator, quad);
  const QuadratureResult den = integrate_form(u, forms.denominator, quad);
  if (!(std::abs(den.value) > quad.abs_tol))
    throw DomainError("rayleigh_quotient: degenerate denominator");
  return {num.value / den.value, num.value, den.value, num.converged && den.converged};
}

std::vector<MinSeqParams> default_schedule(Family f, const MinSeqParams& base, int halvings) {
  std::vector<MinSeqParams> out;
  MinSeqParams p = base;
  const bool logs = uses_log_factors(f);
  if (logs) {
    if (p.a.empty()) p.a = {0.1};
    std::fill(p.a.begin(), p.a.end(), 0.1);
  } else {
    p.a.clear();
  }
  for (double e : {1e-2, 3e-3, 1e-3, 3e-4}) {
    p.epsilon = e;
    out.push_back(p);
  }
  if (!logs) return out;
  // With log factors the quotient only feels ln(1/eps), so eps continues
  // down to the bottom of the double range before the a_i shrink.
  for (double e : {1e-10, 1e-30, 1e-300}) {
    p.epsilon = e;
    out.push_back(p);
  }
  for (size_t i = 0; i < p.a.size(); ++i) {
    for (int h = 0; h < halvings; ++h) {
      p.a[i] *= 0.5;
      out.push_back(p);
    }
  }
  return out;
}

std::vector<MinSeqParams> parse_schedule(const std::string& text, const MinSeqParams& base) {
  auto number = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
      throw ParseError("schedule: malformed number '" + std::string(s) + "'");
    return x;
  };
  std::vector<MinSeqParams> out;
  std::string_view rest(text);
  while (!rest.empty()) {
    const size_t semi = rest.find(';');
    std::string_view item = rest.substr(0, semi);
    rest = semi == std::string_view::npos ? std::string_view() : rest.substr(semi + 1);
    if (item.find_first_not_of(' ') == std::string_view::npos) throw ParseError("schedule: empty step");
    MinSeqParams p = base;
    const size_t colon = item.find(':');
    p.epsilon = number(item.substr(0, colon));
    if (colon != std::string_view::npos) {
      p.a.clear();
      std::string_view as = item.substr(colon + 1);
      while (true) {
        const size_t comma = as.find(',');
        p.a.push_back(number(as.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        as = as.substr(comma + 1);
      }
    }
    out.push_back(p);
  }
  if (out.empty()) throw ParseError("schedule: no steps");
  return out;
}

ScanResult scan_to_limit(Family f, const std::vector<MinSeqParams>& schedule, const QuadratureSpec& quad) {
  if (schedule.empty()) throw DomainError("scan_to_limit: empty schedule");
  ScanResult res;
  res.family = f;
  res.theoretical = theoretical_constant(f, schedule.front());
  std::vector<std::future<QuotientValue>> jobs;
  for (const auto& p : schedule) {
    const int K = static_cast<int>(p.a.size());
    jobs.push_back(std::async(std::launch::async, [f, p, K, quad] { return rayleigh_quotient(f, p, K, quad); }));
  }
  for (size_t i = 0; i < schedule.size(); ++i) res.steps.push_back({schedule[i], jobs[i].get()});
  for (size_t i = 1; i < res.steps.size(); ++i) {
    const double prev = res.steps[i - 1].quotient.value, cur = res.steps[i].quotient.value;
    if (cur > prev + 1e-6) res.monotone = false;
    if (!(cur < prev)) res.strictly_decreasing = false;
  }
  res.extrapolated = res.steps.back().quotient.value;
  if (res.steps.size() >= 3) {
    const size_t n = res.steps.size();
    const double x0 = res.steps[n - 3].quotient.value, x1 = res.steps[n - 2].quotient.value,
                 x2 = res.steps[n - 1].quotient.value;
    const double d = x2 - 2.0 * x1 + x0;
    if (d != 0.0) res.aitken = x2 - (x2 - x1) * (x2 - x1) / d;
  }
  return res;
}

AsymptoticResult functional_asymptotics(Asymptotic which, const MinSeqParams& p, const QuadratureSpec& quad) {
  validate(p);
  if (p.a.size() != 1 || p.m != 0.0 || p.mode_k != 0)
    throw DomainError("functional_asymptotics: needs one log factor, m = 0 and the radial mode");
  const double n = p.N, a = p.a[0], e = p.epsilon;
  // (i), (ii), (v), (vi) go through g = |x|^{(N-4)/2} u, where the integrands
  // carry no cancellation; (iii), (iv) are sums of squares on u directly.
  const bool on_g = which != Asymptotic::III && which != Asymptotic::IV;
  const TestFunction u = on_g ? build_minimizer_v(p) : build_minimizer(p);
  const Term T2 = term(1.0, Density::SecondDerivative, 4.0 - n);
  auto T1 = [n](double c) { return term(c, Density::RadialDerivative, 2.0 - n); };
  Form lhs;
  switch (which) {
    case Asymptotic::I: lhs = {T1(1.0)}; break;
    case Asymptotic::II: lhs = {T2, T1((n - 1.0) * (n - 3.0))}; break;
    case Asymptotic::III: lhs = {term(1.0, Density::Gradient, -2.0)}; break;
    case Asymptotic::IV: lhs = {term(1.0, Density::Laplacian, 0.0)}; break;
    case Asymptotic::V: lhs = {T2, T1(0.5 * n * (n - 4.0) + 3.0)}; break;
    case Asymptotic::VI: lhs = {T2, T1(0.25 * (n - 2.0) * (n - 6.0))}; break;
  }
  const double L = integrate_form(u, lhs, quad).value / sphere_area(p.N);
  const CutoffSpec cut = p.cutoff;
  auto phi2 = [cut](double r) {
    const double c = cutoff_value(cut, r);
    return c * c;
  };
  const double bp[] = {1.0 + a}, bm[] = {-1.0 + a};
  const double Qp = integrate_logweighted(-1.0 + 2.0 * e, bp, phi2, quad).value;
  double R = 0.0;
  switch (which) {
    case Asymptotic::I: R = (1.0 - a) / 4.0 * Qp; break;
    case Asymptotic::II: R = (1.0 - a) / 4.0 * (n - 2.0) * (n - 2.0) * Qp; break;
    case Asymptotic::III:
    case Asymptotic::IV: {
      const double Qm = integrate_logweighted(-1.0 + 2.0 * e, bm, phi2, quad).value;
      R = which == Asymptotic::III
              ? (1.0 - a) / 4.0 * Qp + 0.25 * (n - 4.0) * (n - 4.0) * Qm
              : (1.0 - a) / 8.0 * (n * n - 4.0 * n + 8.0) * Qp + rellich_constant(p.N) * Qm;
      break;
    }
    case Asymptotic::V: R = (1.0 - a) / 8.0 * (n * n - 4.0 * n + 8.0) * Qp; break;
    case Asymptotic::VI: R = (1.0 - a) / 16.0 * (n - 4.0) * (n - 4.0) * Qp; break;
  }
  return {L, R, L / R};
}

}  // namespace hr
