#pragma once

#include <cstdint>
#include <cmath>
#include <random>

// Deterministic generator for property tests.
class Gen {
public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  // Log-uniform on [lo, hi], lo > 0.
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

private:
  std::mt19937_64 engine_;
};

inline constexpr int kPropertyTrials = 200;
