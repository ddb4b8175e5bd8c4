#include "rmt/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "rmt/errors.hpp"

namespace rmt {
namespace {

// Ai(0) and -Ai'(0) as unevaluated sums of three doubles.
constexpr double kAi0[3] = {0.3550280538878172, 2.05233632436212e-17, -1.1009245373379416e-34};
constexpr double kAip0[3] = {0.2588194037928068, -2.522243111610832e-17, -1.1690102804178028e-33};

template <class Real>
Real abs_of(Real v) {
  return v < 0 ? -v : v;
}

template <class Real>
AiryPair airy_maclaurin(double xd) {
  const Real x = xd;
  const Real x3 = x * x * x;
  const Real tiny = Real(1e-30);
  Real f = 1, g = x, gp = 1;
  Real t = 1, u = x, p = x * x / 2, q = 1;
  Real fp = p;
  for (int k = 1; k < 200; ++k) {
    const Real kk = 3 * k;
    t *= x3 / ((kk - 1) * kk);
    u *= x3 / (kk * (kk + 1));
    if (k > 1) p *= x3 / ((kk - 3) * (kk - 1));
    q *= x3 / (kk * (kk - 2));
    f += t;
    g += u;
    if (k > 1) fp += p;
    gp += q;
    const Real scale = abs_of(f) + abs_of(g) + abs_of(fp) + abs_of(gp);
    if (abs_of(t) + abs_of(u) + abs_of(p) + abs_of(q) < tiny * scale) break;
  }
  const Real c1 = Real(kAi0[0]) + Real(kAi0[1]) + Real(kAi0[2]);
  const Real c2 = Real(kAip0[0]) + Real(kAip0[1]) + Real(kAip0[2]);
  return {static_cast<double>(c1 * f - c2 * g), static_cast<double>(c1 * fp - c2 * gp)};
}

// e^{z} K_nu(z) = int_0^inf exp(-2 z sinh^2(t/2)) cosh(nu t) dt, trapezoid in t.
double scaled_bessel_k(double nu, double z) {
  const double h = std::min(0.125, 0.6 / std::sqrt(z));
  double sum = 0.5;
  for (int k = 1; k < 2000; ++k) {
    const double t = k * h;
    const double sh = std::sinh(0.5 * t);
    const double e = -2.0 * z * sh * sh;
    if (e < -800.0) break;
    const double term = std::exp(e) * std::cosh(nu * t);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return h * sum;
}

AiryPair airy_positive(double x) {
  const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
  if (zeta > 745.0) return {0.0, -0.0};
  const double decay = std::exp(-zeta);
  const double k13 = scaled_bessel_k(1.0 / 3.0, zeta);
  const double k23 = scaled_bessel_k(2.0 / 3.0, zeta);
  const double ai = decay * std::sqrt(x / 3.0) * k13 / std::numbers::pi;
  const double aip = -decay * x * k23 / (std::numbers::pi * std::sqrt(3.0));
  return {ai, aip};
}

AiryPair airy_oscillatory(double x) {
  const double z = -x;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  double sum_ai_c = 0.0, sum_ai_s = 0.0, sum_aip_s = 0.0, sum_aip_c = 0.0;
  double u = 1.0, zp = 1.0, prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 60; ++k) {
    if (k > 0) {
      u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
      zp *= zeta;
    }
    const double v = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u;
    const double term = u / zp;
    if (std::fabs(term) > prev) break;
    prev = std::fabs(term);
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      sum_ai_c += sign * u / zp;
      sum_aip_s += sign * v / zp;
    } else {
      sum_ai_s += sign * u / zp;
      sum_aip_c += sign * v / zp;
    }
    if (prev < 1e-17) break;
  }
  const double phase = zeta - 0.25 * std::numbers::pi;
  const double c = std::cos(phase), s = std::sin(phase);
  const double z14 = std::sqrt(std::sqrt(z));
  const double rpi = 1.0 / std::sqrt(std::numbers::pi);
  return {rpi / z14 * (c * sum_ai_c + s * sum_ai_s), rpi * z14 * (s * sum_aip_s - c * sum_aip_c)};
}

template <class Real>
double bessel_series(double alpha, double x, double* deriv) {
  const Real hx = Real(0.5) * Real(x);
  const Real h2 = hx * hx;
  const double lead = std::exp(alpha * std::log(0.5 * x) - log_gamma(alpha + 1.0));
  Real term = 1, sum = 1, dsum = alpha;
  const Real tol = Real(1e-21);
  for (int k = 1; k < 500; ++k) {
    term *= -h2 / (Real(k) * (Real(k) + Real(alpha)));
    sum += term;
    const Real dterm = (Real(2 * k) + Real(alpha)) * term;
    dsum += dterm;
    if (abs_of(term) < tol * abs_of(sum) && abs_of(dterm) < tol * abs_of(dsum)) break;
  }
  *deriv = lead * static_cast<double>(dsum) / x;
  return lead * static_cast<double>(sum);
}

double bessel_hankel(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 0.0, q = 0.0, a = 1.0, xp = 1.0, prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 80; ++k) {
    if (k > 0) {
      const double odd = 2.0 * k - 1.0;
      a *= (mu - odd * odd) / (k * 8.0);
      xp *= x;
    }
    const double term = a / xp;
    if (std::fabs(term) > prev && k > 2) break;
    prev = std::fabs(term);
    const double sign = ((k / 2) % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) p += sign * term;
    else q += sign * term;
    if (prev < 1e-17 * std::fabs(p)) break;
  }
  const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

AiryPair airy(double x) {
  if (!std::isfinite(x)) throw DomainError("airy: non-finite argument");
  if (x < -10.0) return airy_oscillatory(x);
  if (x < -4.0) return airy_maclaurin<__float128>(x);
  if (x <= 2.0) return airy_maclaurin<long double>(x);
  return airy_positive(x);
}

BesselPair bessel_j(double alpha, double x) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) throw ParameterError("bessel_j: order must exceed -1");
  if (!(x >= 0.0) || x > 1e4) throw DomainError("bessel_j: argument outside [0, 1e4]");
  const double inf = std::numeric_limits<double>::infinity();
  if (x == 0.0) {
    if (alpha == 0.0) return {1.0, 0.0};
    if (alpha < 0.0) return {inf, inf};
    if (alpha == 1.0) return {0.0, 0.5};
    return {0.0, alpha > 1.0 ? 0.0 : inf};
  }
  if (x <= std::max(20.0, 2.0 * alpha)) {
    double jp = 0.0;
    const double j = x > 8.0 ? bessel_series<__float128>(alpha, x, &jp) : bessel_series<long double>(alpha, x, &jp);
    return {j, jp};
  }
  const double j = bessel_hankel(alpha, x);
  const double jm1 = bessel_hankel(alpha - 1.0, x);
  return {j, jm1 - alpha / x * j};
}

// Lanczos approximation (g = 7, n = 9) with recurrence shift below 0.5.
double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma: argument must be positive and finite");
  static constexpr double kCoef[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                      771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (x < 0.5) return log_gamma(x + 1.0) - std::log(x);
  if (x == 1.0 || x == 2.0) return 0.0;
  const double z = x - 1.0;
  double a = kCoef[0];
  const double t = z + 7.5;
  for (int i = 1; i < 9; ++i) a += kCoef[i] / (z + i);
  return 0.5 * std::log(2.0 * std::numbers::pi) + (z + 0.5) * std::log(t) - t + std::log(a);
}

double erf(double x) { return std::erf(x); }

}  // namespace rmt
