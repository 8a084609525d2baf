#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hr {

struct Rational {
  long long num = 0;
  long long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

// Reduced fraction with positive denominator.
Rational make_rational(long long num, long long den);

// Sharp constants of the classical inequalities in R^N.
double hardy_constant(int N);            // ((N-2)/2)^2
double rellich_constant(int N);          // (N(N-4)/4)^2
double gradient_rellich_constant(int N); // N^2/4

// Weighted Rellich constant with weight |x|^{-2m} and its log remainder constant.
double sigma(double m, int N);
double sigma_bar(double m, int N);

// First zero of the Bessel function J_0.
double bv_constant();

// c_k = k(k + N - 2), eigenvalue of the Laplace-Beltrami operator on S^{N-1}.
double mode_eigenvalue(int k, int N);

// Quotient of the weighted Laplacian and weighted gradient restricted to
// the k-th spherical mode of the critical power profile.
double mode_quotient(int k, int N, double m);

struct ConstantReport {
  double value = 0.0;
  std::optional<Rational> exact;
  std::optional<int> argmin_k;
  std::string branch;
  // Number of modes k in 1..k_bar with m strictly between the two thresholds.
  int depth = 0;
  std::vector<double> per_mode;
};

// Best constant in the weighted gradient Rellich inequality.
ConstantReport a_mn(int N, double m);

double m_star(int N);
double x0(int N, double m);
int k_bar(int N);
// Thresholds where c_k equals x0; nullopt when the discriminant is not positive.
std::optional<double> m1k(int N, int k);
std::optional<double> m2k(int N, int k);
// Exact value of a threshold when the discriminant is a perfect square.
std::optional<Rational> threshold_exact(int N, int k, bool upper);

// Constant in front of the weighted v-gradient term in the weighted Rellich
// remainder estimate.
double reduction_constant_A(int N, double m);

// Sharp constants comparing the Rellich remainders with v = |x|^{(N-4)/2} u functionals.
enum class Comparison {
  RellichOverVGradient,          // I[u] / int |x|^{2-N} |grad v|^2
  RellichOverVLaplacian,         // I[u] / int |x|^{4-N} |Lap v|^2
  GradientRellichOverVGradient,  // II[u] / int |x|^{2-N} |grad v|^2
  VLaplacianOverRadialExcess,    // int |x|^{4-N}|Lap v|^2 / (int |x|^{-N}(x.grad v)^2 - 1/2 int |x|^{2-N}|grad v|^2)
  GradientRellichOverVLaplacian, // II[u] / int |x|^{4-N} |Lap v|^2
  LaplacianOverWeightedGradient, // int |Lap u|^2 / int |grad u|^2 / |x|^2
};
inline constexpr int kComparisonCount = 6;
double comparison_constant(Comparison c, int N);
std::optional<Rational> comparison_constant_exact(Comparison c, int N);
const char* comparison_name(Comparison c);

// Terms on the right side of the iterated higher order inequalities.
enum class HigherOrderVariant {
  Laplacian,  // int (Lap^m u)^2 bounded below by Rellich chains
  Gradient,   // int |grad Lap^m u|^2 bounded below by Hardy then Rellich chains
  Mixed,      // int (Lap^m u)^2 bounded below via gradient Rellich chains
};

struct HigherOrderTerm {
  double coefficient = 0.0;
  // Integrand is (Lap^j u)^2 or |grad Lap^j u|^2 over |x|^weight_power.
  int laplacian_power = 0;
  bool gradient = false;
  double weight_power = 0.0;
  // Whether the term carries the series sum_i X_1^2 ... X_i^2.
  bool series = false;
};

struct HigherOrderExpansion {
  // Left side: (Lap^m u)^2, or |grad Lap^m u|^2 for the gradient variant.
  int lhs_laplacian_power = 0;
  bool lhs_gradient = false;
  std::vector<HigherOrderTerm> terms;
};

HigherOrderExpansion higher_order_coefficients(int N, int m, int l, HigherOrderVariant v);
// Largest admissible l for the mixed variant.
double mixed_variant_l_max(int N);

}  // namespace hr
