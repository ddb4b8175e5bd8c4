#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

#include "rmt/errors.hpp"
#include "rmt/montecarlo.hpp"

namespace {

rmt::McConfig config(int N, int n1, int n2, int M, std::uint64_t seed = 7) {
  rmt::McConfig c;
  c.N = N;
  c.n1 = n1;
  c.n2 = n2;
  c.M = M;
  c.seed = seed;
  return c;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / v.size();
}

TEST(ThetaMax, SingleEntryIsUniform) {
  const int M = 4000;
  const auto s = rmt::sample_theta_max(config(1, 1, 1, M));
  ASSERT_EQ(static_cast<int>(s.size()), M);
  for (double x : s) {
    EXPECT_GT(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
  EXPECT_NEAR(mean(s), 0.5, 3.0 / std::sqrt(12.0 * M));
  const double below = std::count_if(s.begin(), s.end(), [](double x) { return x < 0.25; }) / double(M);
  EXPECT_NEAR(below, 0.25, 3.0 * std::sqrt(0.25 * 0.75 / M));
}

TEST(ThetaMax, SingleEigenvalueBetaLaw) {
  // For N = 1 the statistic is Beta(n2, n1).
  const int M = 4000;
  const auto s = rmt::sample_theta_max(config(1, 2, 3, M));
  const double var = 3.0 * 2.0 / (25.0 * 6.0);
  EXPECT_NEAR(mean(s), 0.6, 3.0 * std::sqrt(var / M));
}

TEST(ThetaMax, ReproducibleAcrossThreadCounts) {
  const auto cfg = config(8, 16, 24, 200, 99);
  setenv("RMT_THREADS", "1", 1);
  const auto a = rmt::sample_theta_max(cfg);
  setenv("RMT_THREADS", "3", 1);
  const auto b = rmt::sample_theta_max(cfg);
  unsetenv("RMT_THREADS");
  EXPECT_EQ(a, b);
  const auto c = rmt::sample_theta_max(config(8, 16, 24, 200, 100));
  EXPECT_NE(a, c);
}

TEST(ThetaMax, LargestEigenvalueIncreasesWithNumeratorDegrees) {
  const double lo = mean(rmt::sample_theta_max(config(5, 10, 10, 300)));
  const double hi = mean(rmt::sample_theta_max(config(5, 10, 30, 300)));
  EXPECT_LT(lo, hi);
}

TEST(Substreams, DistinctSeeds) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(rmt::substream_seed(20240601, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(rmt::substream_seed(1, 5), rmt::substream_seed(1, 5));
  EXPECT_NE(rmt::substream_seed(1, 5), rmt::substream_seed(2, 5));
}

TEST(McConfig, Validation) {
  EXPECT_THROW(config(0, 1, 1, 100).validate(), rmt::ParameterError);
  EXPECT_THROW(config(10, 5, 20, 100).validate(), rmt::ParameterError);
  EXPECT_THROW(config(10, 20, 20, 50).validate(), rmt::ParameterError);
  EXPECT_NO_THROW(config(10, 20, 30, 100).validate());
}

class Summary : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { tw_ = new rmt::TwStandardization(rmt::tw_standardization()); }
  static void TearDownTestSuite() { delete tw_; }
  static rmt::TwStandardization* tw_;
};
rmt::TwStandardization* Summary::tw_ = nullptr;

TEST_F(Summary, TracyWidomDrawsAreClose) {
  // Stratified inverse-transform draws from F_2, then an arbitrary affine map.
  const int M = 2000;
  std::vector<double> s(M);
  for (int i = 0; i < M; ++i) {
    const double u = (i + 0.5) / M;
    double lo = -8.0, hi = 6.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (tw_->cdf(mid) < u ? lo : hi) = mid;
    }
    s[i] = 0.9 + 0.004 * 0.5 * (lo + hi);
  }
  const auto sum = rmt::mc_summary(s, 100, *tw_);
  EXPECT_LE(sum.kolmogorov, 0.03);
  EXPECT_NEAR(sum.sd, 0.004 * tw_->sd, 1e-4);
  EXPECT_NEAR(sum.sd_scaled, sum.sd * std::pow(100.0, 2.0 / 3.0), 1e-12);
  EXPECT_EQ(sum.samples_used, M);
}

TEST_F(Summary, GaussianDrawsAreFar) {
  const int M = 2000;
  std::vector<double> s(M);
  for (int i = 0; i < M; ++i) {
    const double u = (i + 0.5) / M;
    double lo = -8.0, hi = 8.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (0.5 * std::erfc(-mid / std::sqrt(2.0)) < u ? lo : hi) = mid;
    }
    s[i] = 0.5 * (lo + hi);
  }
  EXPECT_GT(rmt::mc_summary(s, 100, *tw_).kolmogorov, 0.01);
}

TEST_F(Summary, RejectsDegenerateSamples) {
  EXPECT_THROW(rmt::mc_summary(std::vector<double>(200, 0.5), 10, *tw_), rmt::InputError);
  EXPECT_THROW(rmt::mc_summary(std::vector<double>(50, 0.5), 10, *tw_), rmt::InputError);
}

}  // namespace
