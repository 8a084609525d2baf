#include "hardy_rellich/constants.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "hardy_rellich/errors.hpp"

namespace hr {

namespace {

void require_dimension(int N, int min_N, const char* who) {
  if (N < min_N) {
    std::ostringstream os;
    os << who << ": dimension N=" << N << " must be at least " << min_N;
    throw DomainError(os.str());
  }
}

void require_weight(int N, double m, const char* who) {
  require_dimension(N, 5, who);
  if (!(m >= 0.0) || !(m < 0.5 * (N - 4))) {
    std::ostringstream os;
    os << who << ": weight m=" << m << " outside [0, (N-4)/2) for N=" << N;
    throw DomainError(os.str());
  }
}

std::optional<long long> as_integer(double m) {
  if (std::floor(m) == m && std::abs(m) < 1e9) return static_cast<long long>(m);
  return std::nullopt;
}

// (N + 2m)(N - 4 - 2m), written s' below.
double sprime(double m, int N) { return (N + 2.0 * m) * (N - 4.0 - 2.0 * m); }

std::optional<long long> isqrt_exact(long long d) {
  if (d < 0) return std::nullopt;
  long long s = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(d))));
  for (long long c = std::max(0LL, s - 2); c <= s + 2; ++c)
    if (c * c == d) return c;
  return std::nullopt;
}

}  // namespace

Rational make_rational(long long num, long long den) {
  if (den == 0) throw DomainError("make_rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return {num, den};
}

double hardy_constant(int N) {
  require_dimension(N, 3, "hardy_constant");
  const double h = 0.5 * (N - 2);
  return h * h;
}

double rellich_constant(int N) {
  require_dimension(N, 5, "rellich_constant");
  const double c = N * (N - 4.0) / 4.0;
  return c * c;
}

double gradient_rellich_constant(int N) {
  require_dimension(N, 5, "gradient_rellich_constant");
  return N * static_cast<double>(N) / 4.0;
}

double sigma(double m, int N) {
  require_weight(N, m, "sigma");
  const double c = sprime(m, N) / 4.0;
  return c * c;
}

double sigma_bar(double m, int N) {
  require_weight(N, m, "sigma_bar");
  return (1.0 + m) * (1.0 + m) + sprime(m, N) / 8.0;
}

double bv_constant() { return 2.404825557695773; }

double mode_eigenvalue(int k, int N) {
  if (k < 0) throw DomainError("mode index must be non-negative");
  return static_cast<double>(k) * (k + N - 2);
}

double mode_quotient(int k, int N, double m) {
  require_weight(N, m, "mode_quotient");
  const double c = mode_eigenvalue(k, N);
  const double num = sprime(m, N) / 4.0 + c;
  const double q = 0.5 * (N - 4.0 - 2.0 * m);
  return num * num / (q * q + c);
}

double m_star(int N) {
  require_dimension(N, 5, "m_star");
  return (-(N + 4.0) + 2.0 * std::sqrt(static_cast<double>(N) * N - N + 1.0)) / 6.0;
}

double x0(int N, double m) {
  require_dimension(N, 5, "x0");
  return (N - 4.0 - 2.0 * m) * (-N + 6.0 * m + 8.0) / 4.0;
}

int k_bar(int N) {
  require_dimension(N, 5, "k_bar");
  return static_cast<int>(std::floor((std::sqrt(3.0) / 3.0 - 0.5) * (N - 2)));
}

namespace {

long long discriminant(int N, int k) {
  return static_cast<long long>(N - 2) * (N - 2) - 12LL * k * (k + N - 2);
}

std::optional<double> threshold(int N, int k, double sign) {
  require_dimension(N, 5, "threshold");
  if (k < 1) throw DomainError("threshold: mode index must be >= 1");
  const long long d = discriminant(N, k);
  if (d <= 0) return std::nullopt;
  return (2.0 * (N - 5) + sign * std::sqrt(static_cast<double>(d))) / 6.0;
}

}  // namespace

std::optional<double> m1k(int N, int k) { return threshold(N, k, -1.0); }
std::optional<double> m2k(int N, int k) { return threshold(N, k, +1.0); }

std::optional<Rational> threshold_exact(int N, int k, bool upper) {
  require_dimension(N, 5, "threshold_exact");
  if (k < 1) throw DomainError("threshold_exact: mode index must be >= 1");
  const long long d = discriminant(N, k);
  if (d <= 0) return std::nullopt;
  const auto s = isqrt_exact(d);
  if (!s) return std::nullopt;
  return make_rational(2LL * (N - 5) + (upper ? *s : -*s), 6);
}

ConstantReport a_mn(int N, double m) {
  require_weight(N, m, "a_mn");
  ConstantReport rep;
  const int kmax = k_bar(N) + 2;
  double best = std::numeric_limits<double>::infinity();
  int best_k = 0;
  for (int k = 0; k <= kmax; ++k) {
    const double v = mode_quotient(k, N, m);
    rep.per_mode.push_back(v);
    if (v < best) {
      best = v;
      best_k = k;
    }
  }
  rep.value = best;
  rep.argmin_k = best_k;

  const int kb = k_bar(N);
  for (int k = 1; k <= kb; ++k) {
    const auto lo = m1k(N, k);
    const auto hi = m2k(N, k);
    if (lo && hi && m > *lo && m < *hi) ++rep.depth;
  }
  std::ostringstream os;
  if (m <= m_star(N)) {
    os << "m <= m*: radial mode k=0";
  } else if (rep.depth == 0) {
    os << "m > m*, outside every threshold interval: mode k=1";
  } else {
    os << "inside " << rep.depth << " threshold interval" << (rep.depth > 1 ? "s" : "")
       << ": min over modes k=" << rep.depth << "," << rep.depth + 1;
  }
  rep.branch = os.str();

  if (const auto mi = as_integer(m)) {
    const long long c = static_cast<long long>(best_k) * (best_k + N - 2);
    const long long q = N - 4 - 2 * *mi;
    const long long p = q * (N + 2 * *mi) + 4 * c;
    // ((p/4)^2) / ((q^2 + 4c)/4) = p^2 / (4 (q^2 + 4c))
    rep.exact = make_rational(p * p, 4 * (q * q + 4 * c));
  }
  return rep;
}

double reduction_constant_A(int N, double m) {
  require_weight(N, m, "reduction_constant_A");
  const double half = 0.5 * sprime(m, N);
  // The boundary value of m belongs to the radial branch.
  if (m > (-2.0 + std::sqrt(N - 1.0)) / 2.0) return (N - 1.0) + half;
  return 4.0 * (1.0 + m) * (1.0 + m) + half;
}

double comparison_constant(Comparison c, int N) {
  require_dimension(N, 5, "comparison_constant");
  const double n = N;
  switch (c) {
    case Comparison::RellichOverVGradient: return 4.0 + n * (n - 4.0) / 2.0;
    case Comparison::RellichOverVLaplacian: return 0.5 + 2.0 / ((n - 2.0) * (n - 2.0));
    case Comparison::GradientRellichOverVGradient: return 0.25 * (n - 4.0) * (n - 4.0);
    case Comparison::VLaplacianOverRadialExcess: return 2.0 * (n - 2.0) * (n - 2.0);
    case Comparison::GradientRellichOverVLaplacian: {
      const double q = (n - 4.0) / (2.0 * (n - 2.0));
      return q * q;
    }
    case Comparison::LaplacianOverWeightedGradient: return n * n / 4.0;
  }
  throw DomainError("comparison_constant: unknown comparison");
}

std::optional<Rational> comparison_constant_exact(Comparison c, int N) {
  require_dimension(N, 5, "comparison_constant_exact");
  const long long n = N;
  switch (c) {
    case Comparison::RellichOverVGradient: return make_rational(8 + n * (n - 4), 2);
    case Comparison::RellichOverVLaplacian: return make_rational((n - 2) * (n - 2) + 4, 2 * (n - 2) * (n - 2));
    case Comparison::GradientRellichOverVGradient: return make_rational((n - 4) * (n - 4), 4);
    case Comparison::VLaplacianOverRadialExcess: return make_rational(2 * (n - 2) * (n - 2), 1);
    case Comparison::GradientRellichOverVLaplacian:
      return make_rational((n - 4) * (n - 4), 4 * (n - 2) * (n - 2));
    case Comparison::LaplacianOverWeightedGradient: return make_rational(n * n, 4);
  }
  return std::nullopt;
}

const char* comparison_name(Comparison c) {
  switch (c) {
    case Comparison::RellichOverVGradient: return "rellich/v-gradient";
    case Comparison::RellichOverVLaplacian: return "rellich/v-laplacian";
    case Comparison::GradientRellichOverVGradient: return "gradient-rellich/v-gradient";
    case Comparison::VLaplacianOverRadialExcess: return "v-laplacian/radial-excess";
    case Comparison::GradientRellichOverVLaplacian: return "gradient-rellich/v-laplacian";
    case Comparison::LaplacianOverWeightedGradient: return "laplacian/weighted-gradient";
  }
  return "?";
}

double mixed_variant_l_max(int N) {
  require_dimension(N, 5, "mixed_variant_l_max");
  return (-N + 8.0 + 2.0 * std::sqrt(static_cast<double>(N) * N - N + 1.0)) / 12.0;
}

HigherOrderExpansion higher_order_coefficients(int N, int m, int l, HigherOrderVariant v) {
  require_dimension(N, 5, "higher_order_coefficients");
  if (m < 1 || 4 * m >= N) throw DomainError("higher_order_coefficients: need m >= 1 and 4m < N");
  HigherOrderExpansion e;
  e.lhs_laplacian_power = m;
  switch (v) {
    case HigherOrderVariant::Laplacian: {
      if (l < 0 || l > m - 1) throw DomainError("higher_order_coefficients: need 0 <= l <= m-1");
      double prod = 1.0;  // prod_{j<k} sigma(2j)
      for (int k = 1; k <= l; ++k) {
        prod *= sigma(2.0 * (k - 1), N);
        e.terms.push_back({sigma_bar(2.0 * k, N) * prod, m - k - 1, false, 4.0 * k + 4.0, true});
      }
      e.terms.push_back({sigma_bar(0.0, N), m - 1, false, 4.0, true});
      e.terms.insert(e.terms.begin(), {prod * sigma(2.0 * l, N), m - l - 1, false, 4.0 * l + 4.0, false});
      break;
    }
    case HigherOrderVariant::Gradient: {
      if (l < 0 || l > m - 1) throw DomainError("higher_order_coefficients: need 0 <= l <= m-1");
      e.lhs_gradient = true;
      const double h = hardy_constant(N);
      double prod = 1.0;  // prod_{j<=k-2} sigma(2j+1)
      for (int k = 1; k <= l; ++k) {
        if (k >= 2) prod *= sigma(2.0 * (k - 2) + 1.0, N);
        e.terms.push_back({h * sigma_bar(2.0 * k - 1.0, N) * prod, m - k, false, 4.0 * k + 2.0, true});
      }
      double lead = h;
      for (int k = 0; k < l; ++k) lead *= sigma(2.0 * k + 1.0, N);
      e.terms.insert(e.terms.begin(), {lead, m - l, false, 4.0 * l + 2.0, false});
      e.terms.push_back({0.25, m, false, 2.0, true});
      break;
    }
    case HigherOrderVariant::Mixed: {
      if (l < 1 || l > m || l > mixed_variant_l_max(N) + 1e-12)
        throw DomainError("higher_order_coefficients: need 1 <= l <= min(m, l_max)");
      double prod = 1.0;  // prod_{j<=k-2} sigma(2j)
      for (int k = 1; k <= l; ++k) {
        if (k >= 2) prod *= sigma(2.0 * (k - 2), N);
        const double h = 0.5 * (N + 4.0 * k - 4.0);
        e.terms.push_back({0.25 * prod, m - k, true, 4.0 * k - 2.0, true});
        e.terms.push_back({0.25 * prod * h * h, m - k, false, 4.0 * k, true});
      }
      double lead = 1.0;
      for (int k = 0; k < l; ++k) lead *= sigma(2.0 * k, N);
      e.terms.insert(e.terms.begin(), {lead, m - l, false, 4.0 * l, false});
      break;
    }
  }
  return e;
}

}  // namespace hr
