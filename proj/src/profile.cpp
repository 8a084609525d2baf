#include "hardy_rellich/profile.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "hardy_rellich/errors.hpp"

namespace hr {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial(int n, int k) {
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

EulerJet zero_jet(int order) {
  EulerJet z;
  z.order = order;
  return z;
}

// theta^j (r^alpha F) = r^alpha (theta + alpha)^j F
void shift_power(EulerJet& e, double alpha, double t) {
  std::array<double, kMaxJetOrder + 1> out{};
  for (int j = 0; j <= e.order; ++j) {
    double s = 0.0;
    double ap = 1.0;
    for (int i = j; i >= 0; --i) {
      s += binomial(j, i) * ap * e.d[i];
      ap *= alpha;
    }
    out[j] = s;
  }
  e.d = out;
  e.log_scale += alpha * t;
}

class ClosedFormImpl final : public ProfileImpl {
public:
  explicit ClosedFormImpl(ClosedForm s) : s_(std::move(s)) {}
  EulerJet euler(const RadialPoint& p, int order) const override {
    const Jet g = s_.G(p, order);
    Jet e(order, 1.0);
    double c = 1.0;
    for (int j = 1; j <= order; ++j) {
      c *= s_.power / j;
      e[j] = c;
    }
    const Jet f = e * g;
    EulerJet out;
    out.order = order;
    out.log_scale = s_.power * p.t + (s_.log_scale ? s_.log_scale(p) : 0.0);
    for (int j = 0; j <= order; ++j) out.d[j] = f.derivative(j);
    return out;
  }
  int max_order() const override { return s_.max_order; }
  double origin_power() const override { return s_.origin_power; }
  double support() const override { return s_.support; }
  std::vector<double> breakpoints() const override { return s_.breakpoints; }
  std::string describe() const override { return s_.description; }

private:
  ClosedForm s_;
};

class TimesPowerImpl final : public ProfileImpl {
public:
  TimesPowerImpl(RadialProfile f, double alpha) : f_(std::move(f)), alpha_(alpha) {}
  EulerJet euler(const RadialPoint& p, int order) const override {
    EulerJet e = f_.euler(p, order);
    shift_power(e, alpha_, p.t);
    return e;
  }
  int max_order() const override { return f_.max_order(); }
  double origin_power() const override { return f_.origin_power() + alpha_; }
  double support() const override { return f_.support(); }
  std::vector<double> breakpoints() const override { return f_.breakpoints(); }
  std::string describe() const override {
    std::ostringstream os;
    os << "r^" << alpha_ << " * (" << f_.describe() << ")";
    return os.str();
  }
  bool sampled() const override { return f_.sampled(); }

private:
  RadialProfile f_;
  double alpha_;
};

class ModeOperatorImpl final : public ProfileImpl {
public:
  ModeOperatorImpl(RadialProfile f, int k, int N) : f_(std::move(f)), k_(k), N_(N), c_(double(k) * (k + N - 2)) {}
  EulerJet euler(const RadialPoint& p, int order) const override {
    const EulerJet in = f_.euler(p, order + 2);
    EulerJet e;
    e.order = order;
    e.log_scale = in.log_scale;
    // r^2 L_k = theta^2 + (N-2) theta - c_k
    for (int j = 0; j <= order; ++j) e.d[j] = in.d[j + 2] + (N_ - 2) * in.d[j + 1] - c_ * in.d[j];
    shift_power(e, -2.0, p.t);
    return e;
  }
  int max_order() const override { return f_.max_order() - 2; }
  double origin_power() const override {
    const double o = f_.origin_power();
    // The leading power cancels for harmonic polynomials r^k.
    if (std::abs(o * (o + N_ - 2) - c_) < 1e-12) return o - 1.0;
    return o - 2.0;
  }
  double support() const override { return f_.support(); }
  std::vector<double> breakpoints() const override { return f_.breakpoints(); }
  std::string describe() const override {
    std::ostringstream os;
    os << "L_" << k_ << "(" << f_.describe() << ")";
    return os.str();
  }
  bool sampled() const override { return f_.sampled(); }

private:
  RadialProfile f_;
  int k_, N_;
  double c_;
};

class QuinticSplineImpl final : public ProfileImpl {
public:
  QuinticSplineImpl(SplineData d, double origin_power) : d_(std::move(d)), origin_(origin_power) {
    const size_t n = d_.r.size();
    coef_.resize(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
      const double h = d_.r[i + 1] - d_.r[i];
      auto& a = coef_[i];
      a[0] = d_.f[i];
      a[1] = h * d_.df[i];
      a[2] = 0.5 * h * h * d_.d2f[i];
      const double e0 = d_.f[i + 1] - a[0] - a[1] - a[2];
      const double e1 = h * d_.df[i + 1] - a[1] - 2.0 * a[2];
      const double e2 = h * h * d_.d2f[i + 1] - 2.0 * a[2];
      a[3] = 10.0 * e0 - 4.0 * e1 + 0.5 * e2;
      a[4] = -15.0 * e0 + 7.0 * e1 - e2;
      a[5] = 6.0 * e0 - 3.0 * e1 + 0.5 * e2;
    }
  }
  EulerJet euler(const RadialPoint& p, int order) const override {
    const double r = p.r;
    auto it = std::upper_bound(d_.r.begin(), d_.r.end(), r);
    size_t i = it == d_.r.begin() ? 0 : static_cast<size_t>(it - d_.r.begin()) - 1;
    if (i >= coef_.size()) i = coef_.size() - 1;
    const double h = d_.r[i + 1] - d_.r[i];
    const double x = (r - d_.r[i]) / h;
    // Ordinary derivatives of the local quintic.
    std::array<double, 6> der{};
    const auto& a = coef_[i];
    for (int j = 0; j <= 5; ++j) {
      double s = 0.0;
      for (int n = 5; n >= j; --n) s = s * x + a[n] * factorial(n) / factorial(n - j);
      der[j] = s / std::pow(h, j);
    }
    // theta^j f = sum_i S(j, i) r^i f^{(i)}, S the Stirling numbers of the second kind.
    EulerJet e;
    e.order = order;
    for (int j = 0; j <= order; ++j) {
      double s = 0.0;
      double rp = 1.0;
      for (int q = 0; q <= j; ++q) {
        s += stirling2(j, q) * rp * der[q];
        rp *= r;
      }
      e.d[j] = s;
    }
    return e;
  }
  // Only C^2 across knots: higher piecewise derivatives would miss the jumps.
  int max_order() const override { return 2; }
  double origin_power() const override { return origin_; }
  double support() const override { return d_.r.back(); }
  // Third derivatives jump at the knots.
  std::vector<double> breakpoints() const override { return {d_.r.begin() + 1, d_.r.end() - 1}; }
  std::string describe() const override {
    std::ostringstream os;
    os << "quintic spline on " << d_.r.size() << " knots";
    return os.str();
  }
  bool sampled() const override { return true; }

private:
  static double stirling2(int n, int k) {
    if (n == 0 && k == 0) return 1.0;
    if (n == 0 || k == 0) return 0.0;
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1);
  }
  SplineData d_;
  double origin_;
  std::vector<std::array<double, 6>> coef_;
};

void estimate_derivatives(SplineData& d) {
  const size_t n = d.r.size();
  auto d1 = [&](size_t a, size_t b, size_t c, size_t at) {
    // Derivative at node `at` of the parabola through three nodes.
    const double xa = d.r[a], xb = d.r[b], xc = d.r[c], x = d.r[at];
    return d.f[a] * ((x - xb) + (x - xc)) / ((xa - xb) * (xa - xc)) +
           d.f[b] * ((x - xa) + (x - xc)) / ((xb - xa) * (xb - xc)) +
           d.f[c] * ((x - xa) + (x - xb)) / ((xc - xa) * (xc - xb));
  };
  auto d2 = [&](size_t a, size_t b, size_t c) {
    const double xa = d.r[a], xb = d.r[b], xc = d.r[c];
    return 2.0 * (d.f[a] / ((xa - xb) * (xa - xc)) + d.f[b] / ((xb - xa) * (xb - xc)) +
                  d.f[c] / ((xc - xa) * (xc - xb)));
  };
  const bool need1 = d.df.empty(), need2 = d.d2f.empty();
  if (need1) d.df.assign(n, 0.0);
  if (need2) d.d2f.assign(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const size_t a = i == 0 ? 0 : (i == n - 1 ? n - 3 : i - 1);
    if (need1) d.df[i] = d1(a, a + 1, a + 2, i);
    if (need2) d.d2f[i] = d2(a, a + 1, a + 2);
  }
}

}  // namespace

EulerJet RadialProfile::euler(const RadialPoint& p, int order) const {
  if (!impl_) throw DomainError("RadialProfile: empty profile");
  if (order > impl_->max_order() || order < 0) {
    std::ostringstream os;
    os << "derivative order " << order << " unavailable for " << impl_->describe()
       << " (max " << impl_->max_order() << ")";
    throw DifferentiabilityError(os.str());
  }
  if (p.r >= impl_->support()) return zero_jet(order);
  return impl_->euler(p, order);
}

EulerJet RadialProfile::euler(double r, int order) const { return euler(RadialPoint{r, std::log(r)}, order); }

std::vector<double> RadialProfile::derivatives(double r, int order) const {
  const EulerJet e = euler(r, order);
  const double scale = std::exp(e.log_scale);
  std::vector<double> out(order + 1);
  // r^j D^j = theta (theta - 1) ... (theta - j + 1)
  std::vector<double> ff{1.0};
  double rp = 1.0;
  for (int j = 0; j <= order; ++j) {
    if (j > 0) {
      std::vector<double> next(ff.size() + 1, 0.0);
      for (size_t i = 0; i < ff.size(); ++i) {
        next[i + 1] += ff[i];
        next[i] -= (j - 1) * ff[i];
      }
      ff = std::move(next);
      rp *= r;
    }
    double s = 0.0;
    for (size_t i = 0; i < ff.size(); ++i) s += ff[i] * e.d[i];
    out[j] = scale * s / rp;
  }
  return out;
}

double RadialProfile::value(double r) const { return derivatives(r, 0)[0]; }

Jet r_jet(const RadialPoint& p, int order) {
  Jet j(order, p.r);
  double c = p.r;
  for (int i = 1; i <= order; ++i) {
    c /= i;
    j[i] = c;
  }
  return j;
}

Jet one_minus_r_jet(const RadialPoint& p, int order, double D) {
  const double x = D == 1.0 ? p.r : p.r / D;
  Jet j(order, D == 1.0 ? -std::expm1(p.t) : -std::expm1(p.t - std::log(D)));
  double c = x;
  for (int i = 1; i <= order; ++i) {
    c /= i;
    j[i] = -c;
  }
  return j;
}

RadialProfile make_closed_form(ClosedForm spec) {
  if (!spec.G) throw DomainError("make_closed_form: missing generator");
  if (spec.max_order > kMaxJetOrder) spec.max_order = kMaxJetOrder;
  return RadialProfile(std::make_shared<ClosedFormImpl>(std::move(spec)));
}

RadialProfile make_polynomial_bump(int lead, int boundary, std::vector<double> q, double D) {
  if (lead < 0 || boundary < 0) throw DomainError("make_polynomial_bump: exponents must be non-negative");
  if (q.empty()) q = {1.0};
  ClosedForm s;
  s.power = lead;
  s.support = D;
  size_t first = 0;
  while (first < q.size() && q[first] == 0.0) ++first;
  s.origin_power = lead + static_cast<double>(first);
  std::ostringstream os;
  os << "r^" << lead << " (1-r/" << D << ")^" << boundary << " q(r), deg q = " << q.size() - 1;
  s.description = os.str();
  s.G = [boundary, q = std::move(q), D](const RadialPoint& p, int order) {
    const Jet poly = polyval(q, r_jet(p, order));
    if (boundary == 0) return poly;
    return pow_int(one_minus_r_jet(p, order, D), boundary) * poly;
  };
  return make_closed_form(std::move(s));
}

RadialProfile make_quintic_spline(SplineData data, double declared_origin_power) {
  const size_t n = data.r.size();
  if (n < 3) throw ParseError("quintic spline: need at least 3 knots");
  if (data.f.size() != n) throw ParseError("quintic spline: column length mismatch");
  if (data.r.front() != 0.0) throw DomainError("quintic spline: the first knot must be r = 0");
  for (size_t i = 0; i + 1 < n; ++i)
    if (!(data.r[i + 1] > data.r[i])) throw ParseError("quintic spline: knots must increase strictly");
  if ((!data.df.empty() && data.df.size() != n) || (!data.d2f.empty() && data.d2f.size() != n))
    throw ParseError("quintic spline: derivative column length mismatch");
  estimate_derivatives(data);
  RadialProfile p(std::make_shared<QuinticSplineImpl>(std::move(data), declared_origin_power));
  if (!origin_power_consistent(p, declared_origin_power))
    throw DomainError("quintic spline: data is not O(r^p) at the origin for the declared p");
  return p;
}

SplineData read_profile_csv(std::istream& in) {
  SplineData d;
  std::string line;
  size_t columns = 0;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::vector<double> vals;
    bool numeric = true;
    std::stringstream ss(line);
    std::string cell;
    bool any = false;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t\r");
      const auto e = cell.find_last_not_of(" \t\r");
      if (b == std::string::npos) {
        numeric = false;
        continue;
      }
      any = true;
      cell = cell.substr(b, e - b + 1);
      double v = 0.0;
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size()) numeric = false;
      vals.push_back(v);
    }
    if (!any) continue;
    if (!numeric) {
      if (d.r.empty() && columns == 0) continue;  // header
      throw ParseError("profile csv: non-numeric value on line " + std::to_string(lineno));
    }
    if (columns == 0) {
      columns = vals.size();
      if (columns < 2 || columns > 4) throw ParseError("profile csv: expected 2 to 4 columns (r, f, f', f'')");
    } else if (vals.size() != columns) {
      throw ParseError("profile csv: inconsistent column count on line " + std::to_string(lineno));
    }
    d.r.push_back(vals[0]);
    d.f.push_back(vals[1]);
    if (columns > 2) d.df.push_back(vals[2]);
    if (columns > 3) d.d2f.push_back(vals[3]);
  }
  if (d.r.empty()) throw ParseError("profile csv: no data rows");
  return d;
}

RadialProfile load_profile_csv(const std::string& path, double declared_origin_power) {
  std::ifstream in(path);
  if (!in) throw ParseError("profile csv: cannot open " + path);
  return make_quintic_spline(read_profile_csv(in), declared_origin_power);
}

RadialProfile times_power(const RadialProfile& f, double alpha) {
  return RadialProfile(std::make_shared<TimesPowerImpl>(f, alpha));
}

RadialProfile apply_mode_operator(const RadialProfile& f, int k, int N) {
  if (k < 0) throw DomainError("apply_mode_operator: mode index must be non-negative");
  if (f.max_order() < 2)
    throw DifferentiabilityError("apply_mode_operator: profile lacks second derivatives: " + f.describe());
  return RadialProfile(std::make_shared<ModeOperatorImpl>(f, k, N));
}

bool origin_power_consistent(const RadialProfile& f, double p) {
  double s = 0.5 * f.support();
  for (double b : f.breakpoints())
    if (b > 0.0) s = std::min(s, 0.5 * b);
  double first = -1.0, last = -1.0;
  for (int j = 1; j <= 4; ++j) {
    const double t = std::log(s) - j * std::log(10.0);
    const EulerJet e = f.euler(RadialPoint{std::exp(t), t}, 0);
    const double a = std::abs(e.d[0]);
    const double q = a == 0.0 ? 0.0 : std::exp(std::log(a) + e.log_scale - p * t);
    if (!std::isfinite(q)) return false;
    if (j == 1) first = q;
    last = q;
  }
  if (first == 0.0) return last == 0.0;
  return last <= 100.0 * first;
}

}  // namespace hr
