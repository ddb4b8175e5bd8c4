#pragma once

#include <array>
#include <functional>
#include <vector>

#include "rmt/fredholm.hpp"

namespace rmt {

enum class Edge { left, right };

struct EdgeComparison {
  std::vector<double> s_grid;
  std::vector<double> finite_n;
  std::vector<double> limit;
  Edge edge = Edge::right;
  double bessel_order = 0.0;

  double max_abs_err() const;
};

// Rescaled JUE largest-eigenvalue CDF F_N(1 - s/(2N^2)) against the Bessel gap; the left edge uses (b, a).
EdgeComparison jue_hard_edge(int n, double a, double b, Edge edge, const std::vector<double>& s_grid,
                             int finite_nodes = 80, int limit_nodes = 120);

// E_N((0, s/(4N))) for LUE with alpha = 0 against E_hard^{(0)}(s).
EdgeComparison lue_hard_edge(int n, const std::vector<double>& s_grid, int finite_nodes = 80, int limit_nodes = 120);

struct TwStandardization {
  double mean = 0.0;
  double sd = 1.0;
  double total_mass = 1.0;
  GapCurve f2;  // Fredholm-Airy F_2 on the sampling grid

  // F_2 by linear interpolation, 0 / 1 outside the sampled range.
  double cdf(double x) const;
};

TwStandardization tw_standardization(double x_lo = -10.0, double x_hi = 6.0, int n_nodes = 80, double step = 0.02);

struct Calibration {
  double mu = 0.0;
  double sigma = 1.0;
  double max_err = 0.0;
};

// Least-squares fit s_q = mu + sigma x_q over quantile pairs of two CDFs, then the maximal deviation
// |cdf(mu + sigma x) - tw_cdf(x)| over x in [-6, 6].
Calibration calibrate_quantiles(const std::function<double(double)>& cdf, double lo, double hi,
                                const std::function<double(double)>& tw_cdf, const std::array<double, 3>& quantiles,
                                double x_step = 0.02);

Calibration lue_soft_calibration(int n, double alpha, const std::array<double, 3>& quantiles = {0.25, 0.5, 0.75},
                                 const NystromConfig& config = {}, int airy_nodes = 80, double x_step = 0.02);

// sup |a - b| over a grid of step <= 0.01 on the common part of [lo, hi], linear interpolation.
double kolmogorov_distance(const GapCurve& a, const GapCurve& b, double lo, double hi);

double interpolate(const GapCurve& c, double x);

}  // namespace rmt
