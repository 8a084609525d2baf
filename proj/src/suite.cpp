#include "hardy_rellich/suite.hpp"

#include <sstream>

#include "hardy_rellich/errors.hpp"

namespace hr {

UniformStream::UniformStream(std::uint64_t seed) : engine_(seed) {}

double UniformStream::next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

int UniformStream::pick(int n) { return static_cast<int>(next() * n); }

namespace {

// Coefficients of r^lead (1-r)^p q(r) in powers of r.
std::vector<double> expand(int lead, int p, const std::vector<double>& q) {
  std::vector<double> c(lead, 0.0);
  c.insert(c.end(), q.begin(), q.end());
  for (int i = 0; i < p; ++i) {
    std::vector<double> n(c.size() + 1, 0.0);
    for (size_t j = 0; j < c.size(); ++j) {
      n[j] += c[j];
      n[j + 1] -= c[j];
    }
    c = std::move(n);
  }
  return c;
}

double poly_derivative(const std::vector<double>& c, int order, double r) {
  double s = 0.0;
  for (size_t j = c.size(); j-- > static_cast<size_t>(order);) {
    double f = 1.0;
    for (int i = 0; i < order; ++i) f *= static_cast<double>(j - i);
    s = s * r + c[j] * f;
  }
  return s;
}

struct ProfileDraw {
  int lead = 0, boundary = 3;
  std::vector<double> q;
  RadialProfile profile;
  std::string text;
};

ProfileDraw draw_profile(UniformStream& rng, int k, bool as_spline) {
  ProfileDraw d;
  const int j = rng.pick(3);
  d.lead = k + j;
  d.boundary = 3 + rng.pick(3);
  const int deg = rng.pick(5);
  for (int i = 0; i <= deg; ++i) d.q.push_back(rng.in(-1.0, 1.0));
  // Keep q(0) away from zero so the leading power is the declared one.
  if (std::abs(d.q[0]) < 0.1) d.q[0] = d.q[0] < 0.0 ? -0.1 : 0.1;
  std::ostringstream os;
  os << "r^" << d.lead << "(1-r)^" << d.boundary << " deg" << deg;
  if (!as_spline) {
    d.profile = make_polynomial_bump(d.lead, d.boundary, d.q);
  } else {
    const auto c = expand(d.lead, d.boundary, d.q);
    SplineData s;
    const int knots = 41;
    for (int i = 0; i < knots; ++i) {
      const double r = static_cast<double>(i) / (knots - 1);
      s.r.push_back(r);
      s.f.push_back(poly_derivative(c, 0, r));
      s.df.push_back(poly_derivative(c, 1, r));
      s.d2f.push_back(poly_derivative(c, 2, r));
    }
    d.profile = make_quintic_spline(std::move(s), std::min(d.lead, 3));
    os << " spline";
  }
  d.text = os.str();
  return d;
}

}  // namespace

std::vector<SuiteMember> standard_suite(std::uint64_t seed, int size, std::optional<int> only_N) {
  if (size < 1) throw DomainError("standard_suite: size must be positive");
  if (only_N && *only_N < 5) throw DomainError("standard_suite: the Rellich targets need N >= 5");
  UniformStream rng(seed);
  std::vector<SuiteMember> out;
  out.reserve(size);
  for (int i = 0; i < size; ++i) {
    const int N = only_N ? *only_N : kSuiteDimensions[i % kSuiteDimensions.size()];
    const int k = i % 4;
    const bool two_modes = i % 3 == 2;
    const bool spline = !two_modes && i % 5 == 4;
    std::vector<ModeComponent> comps, smooth;
    const ProfileDraw first = draw_profile(rng, k, spline);
    comps.push_back({k, first.profile});
    smooth.push_back({k, make_polynomial_bump(first.lead, first.boundary + 3, first.q)});
    std::ostringstream os;
    os << "N=" << N << " k=" << k << ": " << first.text;
    if (two_modes) {
      const int k2 = (k + 1 + rng.pick(3)) % 4;
      const ProfileDraw second = draw_profile(rng, k2, false);
      comps.push_back({k2, second.profile});
      smooth.push_back({k2, make_polynomial_bump(second.lead, second.boundary + 3, second.q)});
      os << " + k=" << k2 << ": " << second.text;
    }
    SuiteMember m{i, TestFunction(N, std::move(comps)), 0.0, 1.0, spline, std::nullopt, ""};
    if (!spline) m.smoother = TestFunction(N, std::move(smooth));
    m.m_fraction = rng.in(0.0, 0.95);
    m.a_fraction = rng.in(0.05, 1.0);
    os << " mfrac=" << m.m_fraction << " afrac=" << m.a_fraction;
    m.description = os.str();
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace hr
