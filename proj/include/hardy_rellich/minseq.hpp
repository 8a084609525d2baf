#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hardy_rellich/constants.hpp"
#include "hardy_rellich/radial.hpp"

namespace hr {

// phi = 1 on [0, inner], 0 on [outer, D], and a smoothstep of degree
// 2 * smoothness + 1 in between, so phi is C^smoothness.
struct CutoffSpec {
  double inner = 0.5;
  double outer = 1.0;
  int smoothness = 4;
};

double cutoff_value(const CutoffSpec& c, double r);
// Taylor jet of phi(e^t) in t.
Jet cutoff_jet(const CutoffSpec& c, const RadialPoint& p, int order);

// u = r^{-(N-4)/2 + m + eps} X_1^{(-1+a_1)/2} ... X_K^{(-1+a_K)/2} phi(r) phi_k(sigma).
struct MinSeqParams {
  int N = 6;
  double m = 0.0;
  double epsilon = 1e-3;
  std::vector<double> a{0.1};
  CutoffSpec cutoff{};
  int mode_k = 0;
};

// Throws DomainError naming the violated condition.
void validate(const MinSeqParams& p);
RadialProfile minimizer_profile(const MinSeqParams& p);
TestFunction build_minimizer(const MinSeqParams& p);
// The same function on the V side, v = |x|^{(N-4-2m)/2} u = r^eps X-factors phi.
// Its power is eps exactly, so tiny eps survives rounding.
TestFunction build_minimizer_v(const MinSeqParams& p);

// eta = sum_i (-1+a_i) X_1...X_i and B = r eta'(r) in closed form.
double eta(const MinSeqParams& p, double r);
double eta_B(const MinSeqParams& p, double r);

enum class Family {
  Ray1,  // improved Rellich remainder over the next u^2/|x|^4 series term
  Ray2,  // improved gradient Rellich remainder over the next |grad u|^2/|x|^2 series term
  T84,   // weighted version of Ray1 with weight |x|^{-2m}
  E77,   // weighted version of Ray2 with weight |x|^{-2m}
  Amn,   // int |Lap u|^2/|x|^{2m} over int |grad u|^2/|x|^{2m+2} on one spherical mode
  Cmp1, Cmp2, Cmp3, Cmp4, Cmp5, Cmp6,  // the six comparison quotients
};

const char* family_name(Family f);
std::optional<Family> parse_family(const std::string& s);
bool uses_log_factors(Family f);
// The constant the quotient converges to.
double theoretical_constant(Family f, const MinSeqParams& p);

struct QuotientValue {
  double value = 0.0;
  double numerator = 0.0;
  double denominator = 0.0;
  bool converged = false;
};

// K_series is the k of the k-improved inequality: the first K_series - 1
// series terms are subtracted in the numerator and the K_series-th term is
// the denominator. It must equal the number of log factors in params.
QuotientValue rayleigh_quotient(Family f, const MinSeqParams& p, int K_series, const QuadratureSpec& quad);

struct ScanStep {
  MinSeqParams params;
  QuotientValue quotient;
};

struct ScanResult {
  Family family{};
  std::vector<ScanStep> steps;
  double theoretical = 0.0;
  // Last iterate.
  double extrapolated = 0.0;
  // Aitken delta-squared estimate from the last three iterates; informational only.
  std::optional<double> aitken;
  // Non-increasing within 1e-6 slack.
  bool monotone = true;
  bool strictly_decreasing = true;
};

// epsilon over {1e-2, 3e-3, 1e-3, 3e-4} with every a_i = 0.1. Families with
// log factors continue with epsilon in {1e-10, 1e-30, 1e-300} and then halve
// each a_i in turn `halvings` times.
std::vector<MinSeqParams> default_schedule(Family f, const MinSeqParams& base, int halvings = 10);
// "eps:a1,a2;eps:a1,a2;..." with the a list optional for families without logs.
std::vector<MinSeqParams> parse_schedule(const std::string& text, const MinSeqParams& base);

// Evaluates the schedule points concurrently; the result is ordered by step.
ScanResult scan_to_limit(Family f, const std::vector<MinSeqParams>& schedule, const QuadratureSpec& quad);

// Asymptotic expansions of the basic functionals of u^eps, K = 1.
enum class Asymptotic { I = 1, II, III, IV, V, VI };

struct AsymptoticResult {
  double lhs = 0.0;
  double rhs_leading = 0.0;
  double ratio = 0.0;
};

AsymptoticResult functional_asymptotics(Asymptotic which, const MinSeqParams& p, const QuadratureSpec& quad);

}  // namespace hr
