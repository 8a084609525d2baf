#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hardy_rellich/radial.hpp"

namespace hr {

// One randomly generated test function with the parameter fractions the
// checks scale into their own admissible ranges.
struct SuiteMember {
  int index = 0;
  TestFunction u;
  // In [0, 1): a weight m is taken as m_fraction times the check's upper bound.
  double m_fraction = 0.0;
  // In (0, 1]: substitution exponents are a_fraction times their upper bound.
  double a_fraction = 1.0;
  bool spline = false;
  // The same polynomial profiles times (1-r)^3, smooth enough at r = 1 for
  // the polyharmonic checks; empty for spline members.
  std::optional<TestFunction> smoother;
  std::string description;
};

// Deterministic stream of doubles in [0, 1) from a seeded mt19937_64.
class UniformStream {
public:
  explicit UniformStream(std::uint64_t seed);
  double next();
  double in(double lo, double hi) { return lo + (hi - lo) * next(); }
  int pick(int n);

private:
  std::mt19937_64 engine_;
};

inline constexpr int kStandardSuiteSize = 50;
inline const std::vector<int> kSuiteDimensions = {5, 6, 9, 30};

// Member i has mode k = i % 4 and N cycling over the suite dimensions
// (or the single dimension given). Profiles are r^{k+j} (1-r)^p q(r) with
// j in {0,1,2}, p in {3,4,5} and q a random polynomial of degree at most 4.
// Every third member adds a second mode; every fifth single-mode member is
// re-expressed as a quintic spline through samples of the same profile.
std::vector<SuiteMember> standard_suite(std::uint64_t seed, int size = kStandardSuiteSize,
                                        std::optional<int> only_N = std::nullopt);

}  // namespace hr
