#include "hardy_rellich/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "hardy_rellich/errors.hpp"
#include "hardy_rellich/iterlog.hpp"

namespace hr {

namespace {

constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the nodes kXgk[1], kXgk[3], kXgk[5], kXgk[7].
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

bool finite(double x) { return std::isfinite(x); }

// One 15 point rule with the usual roundoff-aware error estimate.
Panel gk15(const std::function<double(double)>& f, double a, double b, bool& bad) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::abs(resk);
  double fv1[7], fv2[7];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double mean = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
  const double ah = std::abs(h);
  resasc *= ah;
  resabs *= ah;
  double err = std::abs((resk - resg) * h);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  if (!finite(resk) || !finite(err)) bad = true;
  return {a, b, resk * h, err};
}

// Globally adaptive bisection over a set of starting intervals.
QuadratureResult adaptive(const std::function<double(double)>& f, const std::vector<double>& knots,
                          const QuadratureSpec& spec, double abs_floor) {
  QuadratureResult out;
  bool bad = false;
  std::priority_queue<Panel> heap;
  for (size_t i = 0; i + 1 < knots.size(); ++i) {
    if (knots[i + 1] <= knots[i]) continue;
    heap.push(gk15(f, knots[i], knots[i + 1], bad));
    out.evaluations += 15;
  }
  auto totals = [&](double& v, double& e) {
    auto copy = heap;
    v = 0.0;
    e = 0.0;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().error;
      copy.pop();
    }
  };
  double value = 0.0, error = 0.0;
  totals(value, error);
  const double tol_abs = std::max(spec.abs_tol, abs_floor);
  while (!bad && !heap.empty()) {
    if (error <= std::max(tol_abs, spec.rel_tol * std::abs(value))) {
      out.converged = true;
      break;
    }
    if (out.subdivisions >= spec.max_subdivisions) break;
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted
    heap.pop();
    Panel left = gk15(f, worst.a, mid, bad);
    Panel right = gk15(f, mid, worst.b, bad);
    out.evaluations += 30;
    ++out.subdivisions;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    // Refresh the running sums now and then to keep drift out.
    if (out.subdivisions % 64 == 0) totals(value, error);
  }
  totals(value, error);
  if (!out.converged && error <= std::max(tol_abs, spec.rel_tol * std::abs(value))) out.converged = true;
  if (bad) {
    out.converged = false;
    value = std::numeric_limits<double>::quiet_NaN();
  }
  out.value = value;
  out.error_estimate = error;
  return out;
}

std::vector<double> knots_with_breaks(double a, double b, std::span<const double> breaks) {
  std::vector<double> k{a};
  for (double x : breaks)
    if (x > a && x < b) k.push_back(x);
  k.push_back(b);
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

}  // namespace

QuadratureResult integrate_to_infinity(const std::function<double(double)>& g, double s0,
                                       const QuadratureSpec& spec,
                                       std::span<const double> breakpoints) {
  QuadratureResult out;
  double lo = s0;
  double width = 1.0;
  double prev = -1.0;
  int small_ratio_run = 0;
  for (int n = 0; n < spec.max_panels; ++n) {
    const double hi = lo + width;
    if (!std::isfinite(hi)) break;
    const double floor = 0.1 * spec.rel_tol * std::abs(out.value);
    QuadratureResult p = adaptive(g, knots_with_breaks(lo, hi, breakpoints), spec, floor);
    out.evaluations += p.evaluations;
    out.subdivisions += p.subdivisions;
    if (!std::isfinite(p.value)) {
      out.value = p.value;
      out.converged = false;
      return out;
    }
    out.value += p.value;
    out.error_estimate += p.error_estimate;
    const double c = std::abs(p.value);
    const double target = 0.25 * std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
    bool done = false;
    if (n >= 3 && prev >= 0.0) {
      if (c == 0.0 && prev == 0.0) {
        done = true;
      } else if (prev > 0.0 && c < prev) {
        const double q = c / prev;
        const double tail = c * q / (1.0 - q);
        // Two consecutive contracting panels guard against a lucky ratio.
        small_ratio_run = (tail <= target) ? small_ratio_run + 1 : 0;
        if (small_ratio_run >= 2) {
          out.error_estimate += tail;
          done = true;
        }
      } else {
        small_ratio_run = 0;
      }
    }
    if (!p.converged) {
      out.converged = false;
      return out;
    }
    if (done) {
      out.converged = true;
      return out;
    }
    prev = c;
    lo = hi;
    width *= 2.0;
  }
  out.converged = false;
  return out;
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureSpec& spec, std::optional<double> declared_power) {
  if (!(b > a)) {
    if (a == b) return {0.0, 0.0, 0, 0, true};
    throw DomainError("integrate: empty or reversed interval");
  }
  const bool use_log = a == 0.0 && (spec.origin_substitution == OriginSubstitution::Log ||
                                    (declared_power && *declared_power < 0.0));
  if (!use_log) return adaptive(f, {a, b}, spec, 0.0);
  // Beyond the double range of r the integrand is dropped; that only matters
  // if the deepest representable value was still significant.
  bool underflow = false;
  double deepest_s = -1.0, deepest_v = 0.0;
  auto g = [&](double s) {
    const double r = b * std::exp(-s);
    const double v = r == 0.0 ? 0.0 : f(r) * r;
    if (r < std::numeric_limits<double>::min() || !std::isfinite(v)) {
      if (!std::isfinite(v) || r == 0.0) underflow = true;
      return std::isfinite(v) ? v : 0.0;
    }
    if (s > deepest_s) {
      deepest_s = s;
      deepest_v = std::abs(v);
    }
    return v;
  };
  QuadratureResult res = integrate_to_infinity(g, 0.0, spec);
  if (underflow && deepest_v > std::max(spec.abs_tol, spec.rel_tol * std::abs(res.value))) res.converged = false;
  return res;
}

QuadratureResult integrate_log_density(const std::function<double(const RadialPoint&)>& h,
                                       double r_lo, double r_hi, const QuadratureSpec& spec,
                                       double declared_power, std::span<const double> breakpoints) {
  if (!(r_hi > r_lo) || r_lo < 0.0) {
    if (r_hi == r_lo) return {0.0, 0.0, 0, 0, true};
    throw DomainError("integrate_log_density: invalid radial interval");
  }
  const bool use_log = r_lo == 0.0 && (spec.origin_substitution == OriginSubstitution::Log ||
                                       declared_power < 0.0);
  if (use_log) {
    const double t_hi = std::log(r_hi);
    std::vector<double> sbreaks;
    for (double x : breakpoints)
      if (x > 0.0 && x < r_hi) sbreaks.push_back(t_hi - std::log(x));
    auto g = [&](double s) {
      const double t = t_hi - s;
      return h(RadialPoint{std::exp(t), t});
    };
    return integrate_to_infinity(g, 0.0, spec, sbreaks);
  }
  auto f = [&](double r) { return h(RadialPoint{r, std::log(r)}) / r; };
  return adaptive(f, knots_with_breaks(r_lo, r_hi, breakpoints), spec, 0.0);
}

QuadratureResult integrate_logweighted(double p, std::span<const double> betas,
                                       const std::function<double(double)>& factor,
                                       const QuadratureSpec& spec, double D) {
  if (!(D > 0.0)) throw DomainError("integrate_logweighted: D must be positive");
  if (p < -1.0) throw DivergenceError("integrate_logweighted: power below -1 diverges at the origin");
  if (p == -1.0) {
    // r^{-1} X_1^{b_1} ... converges iff the first exponent differing from 1 exceeds 1.
    bool ok = false;
    for (double b : betas) {
      if (b == 1.0) continue;
      ok = b > 1.0;
      break;
    }
    if (!ok) throw DivergenceError("integrate_logweighted: logarithmic divergence at the origin");
  }
  if (p == -1.0) {
    // y = X_1(r/D) turns r^{-1} X_1^{b_1} X_2^{b_2} ... dr into y^{b_1 - 2} X_1(y)^{b_2} ... dy,
    // which removes the algebraic tail in s that doubling panels cannot reach.
    auto inner = [&factor, D](double y) { return factor ? factor(D * std::exp(1.0 - 1.0 / y)) : 1.0; };
    return integrate_logweighted(betas[0] - 2.0, betas.subspan(1), inner, spec, 1.0);
  }
  const std::vector<double> bs(betas.begin(), betas.end());
  const double scale = std::pow(D, p + 1.0);
  // The factor is a function on [0, D], so an underflowed r = 0 is a valid argument.
  auto g = [&](double s) {
    const double fac = factor ? factor(D * std::exp(-s)) : 1.0;
    return scale * std::exp(-(p + 1.0) * s) * log_power_product(bs.data(), static_cast<int>(bs.size()), -s) * fac;
  };
  return integrate_to_infinity(g, 0.0, spec);
}

}  // namespace hr
