#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rmt/orthopoly.hpp"
#include "rmt/quadrature.hpp"

namespace rmt {

struct KernelOracle {
  std::function<double(double, double)> eval;
  std::string name;
};

struct GapCurve {
  std::vector<double> s_grid;
  std::vector<double> F;
  std::vector<double> logF;
  std::string method;
  std::vector<bool> nonpositive;  // determinant not positive at the final resolution

  std::size_t size() const { return s_grid.size(); }
};

struct LogDet {
  double value = 0.0;  // -infinity when nonpositive
  bool nonpositive = false;
};

LogDet nystrom_logdet(const KernelOracle& kernel, const QuadratureRule& rule, double s = 0.0);

// log det(I - A) from a symmetric Nystrom matrix A (overwritten).
LogDet logdet_identity_minus(std::vector<double>& a, int m, double s = 0.0);

enum class MapKind { truncated, semi_infinite };

struct NystromConfig {
  int nodes = 0;             // 0 selects the per-ensemble default
  double min_length = 0.0;   // truncation floor; 0 selects 8 (GUE) or 40 (LUE)
  double tail_ratio = 1e-18; // diagonal decay threshold for the truncation length
  MapKind map = MapKind::truncated;
};

int default_nodes(const EnsembleSpec& spec);

// Length L such that the kernel diagonal on [s, s+L] has decayed below tail_ratio of its maximum.
double truncation_length(const EnsembleSpec& spec, double s, const NystromConfig& config);

// log F(s) = log P(lambda_max <= s), with one resolution doubling on a nonpositive determinant.
LogDet gap_logcdf(const EnsembleSpec& spec, double s, const NystromConfig& config);

GapCurve gap_cdf(const EnsembleSpec& spec, const std::vector<double>& s_grid, const NystromConfig& config);

// JUE determinant on (s,1) through the n x n Gram matrix or the M x M Nystrom matrix.
LogDet jue_logdet(const EnsembleSpec& spec, double s, int nodes, bool gram);

// Lower gap log E((0,t)) for LUE, the probability that no eigenvalue lies below t.
LogDet lue_lower_gap_logdet(const EnsembleSpec& spec, double t, int nodes);

double airy_kernel(double s, double t);
LogDet airy_gap_logcdf(double x, int n_nodes);
GapCurve airy_gap_cdf(const std::vector<double>& x_grid, int n_nodes);

double bessel_kernel(double alpha, double x, double y);
LogDet bessel_gap_logcdf(double alpha, double s, int n_nodes);
GapCurve bessel_gap_cdf(double alpha, const std::vector<double>& s_grid, int n_nodes);

}  // namespace rmt
