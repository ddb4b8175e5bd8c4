#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rmt/errors.hpp"
#include "rmt/fredholm.hpp"
#include "rmt/orthopoly.hpp"
#include "rmt/quadrature.hpp"
#include "rmt/specfun.hpp"

namespace {

using rmt::EnsembleSpec;

double gap(const EnsembleSpec& spec, double s, int nodes = 0) {
  rmt::NystromConfig cfg;
  cfg.nodes = nodes;
  return std::exp(rmt::gap_logcdf(spec, s, cfg).value);
}

TEST(NystromLogdet, ZeroKernel) {
  rmt::KernelOracle zero{[](double, double) { return 0.0; }, "zero"};
  EXPECT_EQ(rmt::nystrom_logdet(zero, rmt::gauss_legendre(10)).value, 0.0);
}

TEST(NystromLogdet, RankOneKernel) {
  rmt::KernelOracle one{[](double, double) { return 1.0; }, "one"};
  const auto rule = rmt::map_affine(rmt::gauss_legendre(12), 0.0, 0.5);
  EXPECT_NEAR(rmt::nystrom_logdet(one, rule).value, std::log(0.5), 1e-14);
}

TEST(NystromLogdet, SeparableKernel) {
  // K(x,y) = x y on (0,1): det(I - K) = 1 - 1/3.
  rmt::KernelOracle k{[](double x, double y) { return x * y; }, "xy"};
  const auto rule = rmt::map_affine(rmt::gauss_legendre(8), 0.0, 1.0);
  EXPECT_NEAR(rmt::nystrom_logdet(k, rule).value, std::log(2.0 / 3.0), 1e-14);
}

TEST(NystromLogdet, ReportsNonpositive) {
  rmt::KernelOracle two{[](double, double) { return 2.0; }, "two"};
  const auto r = rmt::nystrom_logdet(two, rmt::map_affine(rmt::gauss_legendre(6), 0.0, 1.0));
  EXPECT_TRUE(r.nonpositive);
  EXPECT_TRUE(std::isinf(r.value));
}

TEST(GapCdf, SingleEigenvalueClosedForms) {
  for (double s : {-2.0, -0.7, 0.0, 0.4, 1.5, 3.0})
    EXPECT_NEAR(gap(EnsembleSpec::gue(1), s), 0.5 * (1.0 + std::erf(s)), 1e-12) << s;
  for (double s : {0.1, 1.0, 2.5, 7.0}) {
    EXPECT_NEAR(gap(EnsembleSpec::lue(1, 0.0), s), -std::expm1(-s), 1e-12) << s;
    EXPECT_NEAR(gap(EnsembleSpec::lue(1, 1.0), s), 1.0 - (1.0 + s) * std::exp(-s), 1e-12) << s;
  }
  for (double s : {-0.9, -0.3, 0.0, 0.5, 0.95}) {
    EXPECT_NEAR(gap(EnsembleSpec::jue(1, 0.0, 0.0), s), 0.5 * (1.0 + s), 1e-12) << s;
    EXPECT_NEAR(gap(EnsembleSpec::jue(1, 1.0, 0.0), s), 0.5 * (s - 0.5 * s * s + 1.5), 1e-12) << s;
  }
}

// P(max <= s) for GUE n = 2 from explicit Hermite functions and a composite Simpson rule.
double gue2_reference(double s) {
  const double c = std::pow(std::numbers::pi, -0.25);
  auto f0 = [c](double x) { return c * std::exp(-0.5 * x * x); };
  auto f1 = [&](double x) { return std::sqrt(2.0) * x * f0(x); };
  const int m = 20000;
  const double hi = s + 20.0, h = (hi - s) / m;
  double i00 = 0, i01 = 0, i11 = 0;
  for (int i = 0; i <= m; ++i) {
    const double x = s + i * h;
    const double w = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    i00 += w * f0(x) * f0(x);
    i01 += w * f0(x) * f1(x);
    i11 += w * f1(x) * f1(x);
  }
  i00 *= h / 3;
  i01 *= h / 3;
  i11 *= h / 3;
  return (1 - i00) * (1 - i11) - i01 * i01;
}

TEST(GapCdf, TwoByTwoGueAgainstIndependentQuadrature) {
  for (double s : {-1.5, -0.5, 0.0, 0.8, 1.6, 2.5})
    EXPECT_NEAR(gap(EnsembleSpec::gue(2), s), gue2_reference(s), 1e-12) << s;
}

TEST(GapCdf, RightTailMatchesKernelTrace) {
  const EnsembleSpec spec = EnsembleSpec::gue(5);
  const double s = 6.0;
  const auto rule = rmt::map_affine(rmt::gauss_legendre(200), s, s + 10.0);
  double tr = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) tr += rule.weights[i] * rmt::cd_kernel(spec, rule.nodes[i], rule.nodes[i]);
  EXPECT_NEAR(-rmt::gap_logcdf(spec, s, {}).value / tr, 1.0, 1e-6);
}

TEST(GapCdf, ResolutionIndependent) {
  const EnsembleSpec specs[] = {EnsembleSpec::gue(10), EnsembleSpec::lue(20, 1.0), EnsembleSpec::jue(10, 2.0, 0.5)};
  const double points[] = {4.2, 85.0, 0.95};
  for (int i = 0; i < 3; ++i) {
    const double a = gap(specs[i], points[i], 120), b = gap(specs[i], points[i], 240);
    EXPECT_NEAR(a, b, 1e-12) << specs[i].label();
    EXPECT_GT(a, 0.01);
    EXPECT_LT(a, 0.999);
  }
}

TEST(GapCdf, MonotoneAndBounded) {
  std::vector<double> grid;
  for (double s = 2.0; s <= 9.0; s += 0.1) grid.push_back(s);
  const auto c = rmt::gap_cdf(EnsembleSpec::gue(20), grid, {});
  ASSERT_EQ(c.size(), grid.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    EXPECT_GE(c.F[i], 0.0);
    EXPECT_LE(c.F[i], 1.0);
    EXPECT_FALSE(c.nonpositive[i]);
    if (i > 0) EXPECT_GE(c.F[i], c.F[i - 1]);
  }
  EXPECT_LT(c.F.front(), 1e-6);
  EXPECT_GT(c.F.back(), 1 - 1e-6);
}

TEST(GapCdf, OutOfSupport) {
  EXPECT_EQ(gap(EnsembleSpec::lue(3, 0.0), -1.0), 0.0);
  EXPECT_EQ(gap(EnsembleSpec::jue(3, 0.0, 0.0), -1.0), 0.0);
  EXPECT_EQ(gap(EnsembleSpec::jue(3, 0.0, 0.0), 1.0), 1.0);
}

TEST(GapCdf, RejectsBadInput) {
  EXPECT_THROW(rmt::gap_cdf(EnsembleSpec::gue(3), {1.0, 0.5}, {}), rmt::InputError);
  EXPECT_THROW(rmt::gap_logcdf(EnsembleSpec::gue(3), std::nan(""), {}), rmt::InputError);
  rmt::NystromConfig cfg;
  cfg.nodes = 8;
  EXPECT_THROW(rmt::gap_logcdf(EnsembleSpec::gue(3), 0.0, cfg), rmt::ParameterError);
}

TEST(JueLogdet, GramAndNystromAgree) {
  for (double s : {0.9, 0.95, 0.98, 0.995}) {
    const EnsembleSpec spec = EnsembleSpec::jue(12, 1.0, 3.0);
    EXPECT_NEAR(rmt::jue_logdet(spec, s, 100, true).value, rmt::jue_logdet(spec, s, 100, false).value, 1e-10) << s;
  }
}

TEST(LueLowerGap, ExponentialForZeroAlpha) {
  for (int n : {1, 5, 20})
    for (double t : {0.01, 0.05, 0.2})
      EXPECT_NEAR(rmt::lue_lower_gap_logdet(EnsembleSpec::lue(n, 0.0), t, 60).value, -n * t, 1e-11) << n << " " << t;
}

// Reference values of F_2 from a 30-digit evaluation of the Airy determinant.
TEST(AiryGap, MatchesReferenceValues) {
  const double ref[][2] = {{-3, 0.0803195529393345481}, {-2, 0.413224142505122555}, {0, 0.969372828355262668},
                           {1, 0.997505438149389249}};
  for (const auto& r : ref) EXPECT_NEAR(std::exp(rmt::airy_gap_logcdf(r[0], 80).value), r[1], 1e-12) << r[0];
}

TEST(AiryGap, KernelDiagonalContinuous) {
  for (double s : {-3.0, 0.0, 2.0}) EXPECT_NEAR(rmt::airy_kernel(s, s + 1e-8), rmt::airy_kernel(s, s), 1e-8);
}

TEST(BesselGap, OrderZeroIsExponential) {
  for (double s : {0.5, 2.0, 8.0, 15.0}) EXPECT_NEAR(rmt::bessel_gap_logcdf(0.0, s, 80).value, -0.25 * s, 2e-10) << s;
}

TEST(BesselGap, OrderOneSmallGapExpansion) {
  // K(x,x) = x/32 - x^2/192 + O(x^3) for order 1.
  const double s = 1e-3;
  const double deficit = -std::expm1(rmt::bessel_gap_logcdf(1.0, s, 40).value);
  EXPECT_NEAR(deficit / (s * s / 64.0 - s * s * s / 576.0), 1.0, 1e-3);
}

TEST(BesselGap, DecreasingInOrderAndArgument) {
  double prev = 1.0;
  for (double s = 1.0; s <= 15.0; s += 1.0) {
    const double e2 = rmt::bessel_gap_logcdf(2.0, s, 80).value;
    EXPECT_LT(e2, std::log(prev));
    EXPECT_GT(e2, rmt::bessel_gap_logcdf(0.0, s, 80).value);
    prev = std::exp(e2);
  }
}

}  // namespace
