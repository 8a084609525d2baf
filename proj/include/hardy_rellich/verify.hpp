#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hardy_rellich/quadrature.hpp"
#include "hardy_rellich/radial.hpp"
#include "hardy_rellich/suite.hpp"

namespace hr {

enum class CheckKind { Identity, Inequality };

struct RegistryEntry {
  std::string id;
  CheckKind kind = CheckKind::Identity;
  std::string description;
};

const std::vector<RegistryEntry>& registry();
std::optional<RegistryEntry> find_target(const std::string& id);
std::vector<std::string> targets_of(CheckKind kind);

struct CaseResult {
  int index = 0;
  std::string description;
  double lhs = 0.0;
  double rhs = 0.0;
  // Relative residual for identities, lhs - rhs for inequalities.
  double value = 0.0;
  bool skipped = false;
  std::string reason;
  bool pass = true;
  bool converged = true;
};

struct CheckReport {
  std::string target;
  CheckKind kind = CheckKind::Identity;
  double tolerance = 0.0;
  int series_terms = 0;
  std::vector<CaseResult> cases;
  // Index into cases of the largest residual or the smallest slack.
  std::optional<size_t> worst_case;
  bool pass = true;
};

inline constexpr double kIdentityTolerance = 1e-7;
inline constexpr double kInequalityTolerance = 1e-9;
inline constexpr int kDefaultSeriesTerms = 5;

// Quadrature for suite checks. High-dimensional members have integrals far
// below the default absolute floor, so only the relative tolerance binds.
inline QuadratureSpec verification_quadrature() {
  QuadratureSpec q;
  q.abs_tol = 1e-250;
  return q;
}

// Relative residual |lhs - rhs| / (|lhs| + |rhs| + floor) per case.
CheckReport check_identity(const std::string& target, const std::vector<SuiteMember>& suite, const QuadratureSpec& quad,
                           double tolerance = kIdentityTolerance);
// Slack lhs - rhs per case; K series terms truncate the improved inequalities.
CheckReport check_inequality(const std::string& target, const std::vector<SuiteMember>& suite, int K,
                             const QuadratureSpec& quad, double tolerance = kInequalityTolerance);

// Runs every target of the given kinds concurrently; reports follow registry order.
std::vector<CheckReport> run_checks(const std::vector<std::string>& targets, const std::vector<SuiteMember>& suite,
                                    int K, const QuadratureSpec& quad);

std::string reports_to_json(const std::vector<CheckReport>& reports);
std::string reports_to_csv(const std::vector<CheckReport>& reports);

// Finiteness of the integrals of V^{N/2} X_1^{1-N} (Hardy-type potential)
// and W^{N/4} X_1^{1-N/2} (Rellich-type potential) over the unit ball.
enum class PotentialClass { Hardy, Rellich };

struct Admissibility {
  bool finite = false;
  double value = 0.0;
  // Partial integrals over (2^{-j}, 1].
  std::vector<double> partials;
  // Whether the last partials agree to the quadrature tolerance.
  bool stabilized = false;
};

// Nested intervals (2^{-j}, 1]: divergent once a partial exceeds growth_factor
// times the first nonzero partial, or turns non-finite.
Admissibility admissibility(const std::function<double(double)>& potential, int N, PotentialClass which,
                            const QuadratureSpec& quad, double growth_factor = 1e6);

// (remainder) / (Sobolev term)^{power} for a single-mode test function, the
// sharp term removed from the remainder. Laplacian: Rellich remainder against
// int |u|^{2N/(N-4)} X_1^{2(N-2)/(N-4)}. Gradient: gradient Rellich remainder
// against int |grad u|^{2N/(N-2)} X_1^{2(N-1)/(N-2)}.
enum class SobolevKind { Laplacian, Gradient };

struct SobolevValue {
  double quotient = 0.0;
  double remainder = 0.0;
  double sobolev_integral = 0.0;
  bool converged = false;
};

SobolevValue sobolev_quotient(SobolevKind which, const TestFunction& tf, const QuadratureSpec& quad);
// Mean of |phi_k|^q over the sphere for the zonal harmonic with mean square 1.
double zonal_harmonic_abs_moment(int k, int N, double q);

}  // namespace hr
