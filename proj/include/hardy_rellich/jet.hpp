#pragma once

#include <array>
#include <span>

// Truncated Taylor series about a point. c[j] = g^{(j)}(x0) / j!.
// Used for exact derivatives of closed-form radial profiles.

namespace hr {

inline constexpr int kMaxJetOrder = 10;

class Jet {
public:
  explicit Jet(int order = 0, double value = 0.0);
  static Jet variable(int order, double x0);

  int order() const { return order_; }
  double operator[](int j) const { return c_[j]; }
  double& operator[](int j) { return c_[j]; }
  double value() const { return c_[0]; }
  // j-th derivative, j! c[j].
  double derivative(int j) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
  Jet& operator+=(double s);

private:
  int order_;
  std::array<double, kMaxJetOrder + 1> c_{};
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator-(Jet a);
Jet operator*(const Jet& a, const Jet& b);
Jet operator*(Jet a, double s);
Jet operator*(double s, Jet a);
Jet operator+(Jet a, double s);
Jet operator+(double s, Jet a);
Jet operator-(double s, const Jet& a);
Jet operator/(const Jet& a, const Jet& b);
Jet operator/(double s, const Jet& b);

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet pow(const Jet& a, double alpha);
Jet pow_int(const Jet& a, int n);

// sum_i coeffs[i] x^i
Jet polyval(std::span<const double> coeffs, const Jet& x);

}  // namespace hr
