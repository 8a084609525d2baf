#include "hardy_rellich/jet.hpp"

#include <algorithm>
#include <cmath>

#include "hardy_rellich/errors.hpp"

namespace hr {

Jet::Jet(int order, double value) : order_(order) {
  if (order < 0 || order > kMaxJetOrder)
    throw DifferentiabilityError("Jet: order out of range");
  c_[0] = value;
}

Jet Jet::variable(int order, double x0) {
  Jet j(order, x0);
  if (order >= 1) j.c_[1] = 1.0;
  return j;
}

double Jet::derivative(int j) const {
  double f = 1.0;
  for (int i = 2; i <= j; ++i) f *= i;
  return f * c_[j];
}

Jet& Jet::operator+=(const Jet& o) {
  order_ = std::min(order_, o.order_);
  for (int j = 0; j <= order_; ++j) c_[j] += o.c_[j];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  order_ = std::min(order_, o.order_);
  for (int j = 0; j <= order_; ++j) c_[j] -= o.c_[j];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (int j = 0; j <= order_; ++j) c_[j] *= s;
  return *this;
}

Jet& Jet::operator+=(double s) {
  c_[0] += s;
  return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator-(Jet a) { return a *= -1.0; }
Jet operator*(Jet a, double s) { return a *= s; }
Jet operator*(double s, Jet a) { return a *= s; }
Jet operator+(Jet a, double s) { return a += s; }
Jet operator+(double s, Jet a) { return a += s; }
Jet operator-(double s, const Jet& a) { return -a + s; }

Jet operator*(const Jet& a, const Jet& b) {
  const int n = std::min(a.order(), b.order());
  Jet out(n);
  for (int j = 0; j <= n; ++j) {
    double s = 0.0;
    for (int i = 0; i <= j; ++i) s += a[i] * b[j - i];
    out[j] = s;
  }
  return out;
}

Jet operator/(const Jet& a, const Jet& b) {
  const int n = std::min(a.order(), b.order());
  Jet out(n);
  for (int j = 0; j <= n; ++j) {
    double s = a[j];
    for (int i = 1; i <= j; ++i) s -= b[i] * out[j - i];
    out[j] = s / b[0];
  }
  return out;
}

Jet operator/(double s, const Jet& b) { return Jet(b.order(), s) / b; }

Jet exp(const Jet& a) {
  Jet out(a.order(), std::exp(a[0]));
  for (int j = 1; j <= a.order(); ++j) {
    double s = 0.0;
    for (int i = 1; i <= j; ++i) s += i * a[i] * out[j - i];
    out[j] = s / j;
  }
  return out;
}

Jet log(const Jet& a) {
  Jet out(a.order(), std::log(a[0]));
  for (int j = 1; j <= a.order(); ++j) {
    double s = a[j];
    for (int i = 1; i < j; ++i) s -= i * out[i] * a[j - i] / j;
    out[j] = s / a[0];
  }
  return out;
}

Jet pow(const Jet& a, double alpha) {
  Jet out(a.order(), std::pow(a[0], alpha));
  for (int j = 1; j <= a.order(); ++j) {
    double s = 0.0;
    for (int i = 1; i <= j; ++i) s += (alpha * i - (j - i)) * a[i] * out[j - i];
    out[j] = s / (j * a[0]);
  }
  return out;
}

Jet pow_int(const Jet& a, int n) {
  Jet out(a.order(), 1.0);
  Jet base = a;
  for (int e = n; e > 0; e >>= 1) {
    if (e & 1) out = out * base;
    if (e > 1) base = base * base;
  }
  return out;
}

Jet polyval(std::span<const double> coeffs, const Jet& x) {
  Jet out(x.order(), 0.0);
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) out = out * x + *it;
  return out;
}

}  // namespace hr
