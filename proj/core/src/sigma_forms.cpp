#include <cmath>
#include <sstream>

#include "rmt/anchored.hpp"
#include "rmt/errors.hpp"

namespace rmt {
namespace {

SigmaForm piv_skeleton(int n, std::string label) {
  if (n < 1) throw ParameterError("sigma form requires n >= 1");
  SigmaForm f;
  f.label = std::move(label);
  f.prefactor = [](double, double, double) { return 1.0; };
  f.x_of_s = [](double s) { return s; };
  f.s_of_x = [](double x) { return x; };
  f.from_log_cdf = [](double s, double g1, double g2, double g3) { return CauchyData{s, g1, g2, g3}; };
  f.log_derivative = [](double, double sigma) { return sigma; };
  return f;
}

}  // namespace

SigmaForm sigma_piv(int n) {
  SigmaForm f = piv_skeleton(n, "sigma-PIV");
  const double nn = n;
  f.radicand = [nn](double s, double sg, double sp) {
    const double u = s * sp - sg;
    return 4.0 * u * u - 4.0 * sp * sp * (sp + 2.0 * nn);
  };
  return f;
}

SigmaForm sigma_piv_perturbed(int n, PivVariant variant) {
  const double nn = n;
  switch (variant) {
    case PivVariant::shift_001: {
      SigmaForm f = piv_skeleton(n, "sigma-PIV-shift_001");
      f.radicand = [nn](double s, double sg, double sp) {
        const double u = s * sp - sg;
        return 4.0 * u * u - 4.0 * sp * sp * (sp + 2.0 * nn + 0.01);
      };
      return f;
    }
    case PivVariant::alt_A: {
      SigmaForm f = piv_skeleton(n, "sigma-PIV-alt_A");
      f.radicand = [nn](double s, double sg, double sp) {
        const double u = s * sp - sg;
        return 4.0 * u * u - 4.0 * (sp - nn) * (sp - nn - 1.0) * sp;
      };
      return f;
    }
    case PivVariant::alt_B: {
      SigmaForm f = piv_skeleton(n, "sigma-PIV-alt_B");
      f.radicand = [nn](double s, double sg, double sp) {
        const double u = s * sp - sg + nn;
        return 4.0 * u * u - 4.0 * sp * sp * (sp + 2.0 * nn + 1.0) + 3.0 * sp * sp * sp * sp;
      };
      return f;
    }
  }
  throw ParameterError("unknown sigma-PIV variant");
}

// sigma(s) = s d/ds log F(s) for the LUE largest eigenvalue:
// (s sigma'')^2 = (sigma - s sigma' + 2 sigma'^2 + (2N + alpha) sigma')^2 - 4 sigma'^2 (sigma' + N)(sigma' + N + alpha).
SigmaForm sigma_pv(int n, double alpha) {
  if (n < 1) throw ParameterError("sigma-PV requires N >= 1");
  if (!(alpha > -1.0)) throw ParameterError("sigma-PV requires alpha > -1");
  SigmaForm f;
  f.label = "sigma-PV";
  const double nn = n, al = alpha;
  f.radicand = [nn, al](double s, double sg, double sp) {
    const double u = sg - s * sp + 2.0 * sp * sp + (2.0 * nn + al) * sp;
    return u * u - 4.0 * sp * sp * (sp + nn) * (sp + nn + al);
  };
  f.prefactor = [](double s, double, double) { return s; };
  f.x_of_s = [](double s) { return s; };
  f.s_of_x = [](double x) { return x; };
  f.from_log_cdf = [](double s, double g1, double g2, double g3) {
    return CauchyData{s, s * g1, g1 + s * g2, 2.0 * g2 + s * g3};
  };
  f.log_derivative = [](double s, double sigma) { return sigma / s; };
  return f;
}

// With t = (1 + s)/2 and L = log F,
// sigma(t) = t (t - 1) L'(t) - v1^2 t + (v1^2 - v2 v4)/2 satisfies
// sigma' (t (1 - t) sigma'')^2 + (sigma' (2 sigma - (2t - 1) sigma') - v1 v2 v3 v4)^2 = prod_k (sigma' + v_k^2).
SigmaForm sigma_pvi(int n, double a, double b) {
  if (n < 1) throw ParameterError("sigma-PVI requires N >= 1");
  if (!(a > -1.0 && b > -1.0)) throw ParameterError("sigma-PVI requires a, b > -1");
  SigmaForm f;
  f.label = "sigma-PVI";
  const double v1 = n + 0.5 * (a + b), v2 = 0.5 * (a + b), v3 = v1, v4 = 0.5 * (b - a);
  const double shift = 0.5 * (v1 * v1 - v2 * v4);
  const double vprod = v1 * v2 * v3 * v4;
  f.radicand = [=](double t, double sg, double sp) {
    if (sp == 0.0) return 0.0;
    const double q = sp * (2.0 * sg - (2.0 * t - 1.0) * sp) - vprod;
    const double prod = (sp + v1 * v1) * (sp + v2 * v2) * (sp + v3 * v3) * (sp + v4 * v4);
    return (prod - q * q) / sp;
  };
  f.prefactor = [](double t, double, double) { return t * (1.0 - t); };
  f.x_of_s = [](double s) { return 0.5 * (1.0 + s); };
  f.s_of_x = [](double t) { return 2.0 * t - 1.0; };
  f.from_log_cdf = [=](double s, double g1, double g2, double g3) {
    const double t = 0.5 * (1.0 + s);
    const double l1 = 2.0 * g1, l2 = 4.0 * g2, l3 = 8.0 * g3;
    const double tt = t * (t - 1.0);
    return CauchyData{t, tt * l1 - v1 * v1 * t + shift, (2.0 * t - 1.0) * l1 + tt * l2 - v1 * v1,
                      2.0 * l1 + 2.0 * (2.0 * t - 1.0) * l2 + tt * l3};
  };
  f.log_derivative = [=](double t, double sigma) { return 0.5 * (sigma + v1 * v1 * t - shift) / (t * (t - 1.0)); };
  f.stretched = true;
  return f;
}

SigmaForm default_sigma_form(const EnsembleSpec& spec) {
  spec.validate();
  switch (spec.kind) {
    case EnsembleKind::gue: return sigma_piv(spec.n);
    case EnsembleKind::lue: return sigma_pv(spec.n, spec.alpha);
    case EnsembleKind::jue: return sigma_pvi(spec.n, spec.a, spec.b);
  }
  throw ParameterError("unknown ensemble");
}

}  // namespace rmt
