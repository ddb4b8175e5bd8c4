#include "rmt/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "rmt/errors.hpp"

namespace rmt {

QuadratureRule gauss_legendre(int n) {
  if (n < 1 || n > 2000) throw ParameterError("gauss_legendre: N must lie in [1, 2000]");
  QuadratureRule rule;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) {
        double q0 = 1.0, q1 = x;
        for (int k = 2; k <= n; ++k) {
          const double q2 = ((2.0 * k - 1.0) * x * q1 - (k - 1.0) * q0) / k;
          q0 = q1;
          q1 = q2;
        }
        dp = n * (x * q1 - q0) / (x * x - 1.0);
        break;
      }
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

QuadratureRule map_affine(const QuadratureRule& rule, double lo, double hi) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) throw ParameterError("map_affine: need finite lo < hi");
  if (!std::isfinite(rule.hi)) throw ParameterError("map_affine: source rule must be on a finite interval");
  const double scale = (hi - lo) / (rule.hi - rule.lo);
  QuadratureRule out;
  out.lo = lo;
  out.hi = hi;
  out.nodes.resize(rule.size());
  out.weights.resize(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    out.nodes[i] = lo + (rule.nodes[i] - rule.lo) * scale;
    out.weights[i] = rule.weights[i] * scale;
  }
  return out;
}

QuadratureRule map_semi_infinite(const QuadratureRule& rule, double x) {
  if (rule.lo != 0.0 || rule.hi != 1.0) throw ParameterError("map_semi_infinite: source rule must be on (0,1)");
  QuadratureRule out;
  out.lo = x;
  out.hi = std::numeric_limits<double>::infinity();
  out.nodes.resize(rule.size());
  out.weights.resize(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double z = rule.nodes[i];
    const double r = 1.0 / (1.0 - z);
    out.nodes[i] = x + z * r;
    out.weights[i] = rule.weights[i] * r * r;
  }
  return out;
}

}  // namespace rmt
