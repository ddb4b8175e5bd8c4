#pragma once

#include <cstdint>
#include <vector>

#include "rmt/edges.hpp"

namespace rmt {

struct McConfig {
  int N = 100;
  int n1 = 200;
  int n2 = 300;
  int M = 2000;
  std::uint64_t seed = 20240601;

  void validate() const;
};

struct McSummary {
  double mean = 0.0;
  double sd = 0.0;
  double sd_scaled = 0.0;  // sd * N^{2/3}
  double kolmogorov = 0.0;
  int samples_used = 0;
};

// Largest eigenvalue of (A+B)^{-1} B for independent complex Wisharts; deterministic in the seed.
std::vector<double> sample_theta_max(const McConfig& config, int* resampled = nullptr);

McSummary mc_summary(const std::vector<double>& samples, int N, const TwStandardization& tw);

// Per-sample generator seeded from (seed, index).
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace rmt
