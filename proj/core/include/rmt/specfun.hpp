#pragma once

namespace rmt {

struct AiryPair {
  double ai;
  double aip;
};

struct BesselPair {
  double j;
  double jp;
};

// Ai and Ai'. Any finite x is accepted; for large positive x both underflow to 0.
AiryPair airy(double x);

// J_alpha(x) and its derivative for real order alpha > -1 and 0 <= x <= 1e4.
BesselPair bessel_j(double alpha, double x);

double log_gamma(double x);

double erf(double x);

}  // namespace rmt
