#pragma once

#include <limits>
#include <vector>

namespace rmt {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  double lo = -1.0;
  double hi = 1.0;  // +infinity for semi-infinite rules

  std::size_t size() const { return nodes.size(); }
};

QuadratureRule gauss_legendre(int n);

QuadratureRule map_affine(const QuadratureRule& rule, double lo, double hi);

// t = x + z/(1-z), omega = w/(1-z)^2 for a rule on (0,1).
QuadratureRule map_semi_infinite(const QuadratureRule& rule, double x);

}  // namespace rmt
