#include "rmt/orthopoly.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "rmt/errors.hpp"
#include "rmt/specfun.hpp"

namespace rmt {

EnsembleSpec EnsembleSpec::gue(int n) {
  EnsembleSpec s;
  s.kind = EnsembleKind::gue;
  s.n = n;
  s.validate();
  return s;
}

EnsembleSpec EnsembleSpec::lue(int n, double alpha) {
  EnsembleSpec s;
  s.kind = EnsembleKind::lue;
  s.n = n;
  s.alpha = alpha;
  s.validate();
  return s;
}

EnsembleSpec EnsembleSpec::jue(int n, double a, double b) {
  EnsembleSpec s;
  s.kind = EnsembleKind::jue;
  s.n = n;
  s.a = a;
  s.b = b;
  s.validate();
  return s;
}

void EnsembleSpec::validate() const {
  if (n < 1) throw ParameterError("ensemble size must be at least 1");
  if (kind == EnsembleKind::lue && !(alpha > -1.0 && std::isfinite(alpha)))
    throw ParameterError("LUE requires alpha > -1");
  if (kind == EnsembleKind::jue && !(a > -1.0 && b > -1.0 && std::isfinite(a) && std::isfinite(b)))
    throw ParameterError("JUE requires a > -1 and b > -1");
}

std::string EnsembleSpec::label() const {
  std::ostringstream os;
  switch (kind) {
    case EnsembleKind::gue: os << "GUE(n=" << n << ")"; break;
    case EnsembleKind::lue: os << "LUE(N=" << n << ",alpha=" << alpha << ")"; break;
    case EnsembleKind::jue: os << "JUE(N=" << n << ",a=" << a << ",b=" << b << ")"; break;
  }
  return os.str();
}

Recurrence::Recurrence(const EnsembleSpec& spec) : spec_(spec) {
  spec_.validate();
  const int n = spec_.n;
  a_.assign(n + 2, 0.0);
  b_.assign(n + 2, 0.0);
  switch (spec_.kind) {
    case EnsembleKind::gue:
      for (int k = 1; k <= n + 1; ++k) a_[k] = std::sqrt(0.5 * k);
      p0_ = std::pow(std::numbers::pi, -0.25);
      break;
    case EnsembleKind::lue: {
      const double al = spec_.alpha;
      for (int k = 0; k <= n + 1; ++k) b_[k] = 2.0 * k + al + 1.0;
      for (int k = 1; k <= n + 1; ++k) a_[k] = std::sqrt(k * (k + al));
      p0_ = std::exp(-0.5 * log_gamma(al + 1.0));
      break;
    }
    case EnsembleKind::jue: {
      const double pa = spec_.a, pb = spec_.b, ab = pa + pb;
      b_[0] = (pb - pa) / (ab + 2.0);
      for (int k = 1; k <= n + 1; ++k) {
        const double m = 2.0 * k + ab;
        b_[k] = (pb * pb - pa * pa) / (m * (m + 2.0));
      }
      a_[1] = std::sqrt(4.0 * (1.0 + pa) * (1.0 + pb) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab)));
      for (int k = 2; k <= n + 1; ++k) {
        const double m = 2.0 * k + ab;
        a_[k] = std::sqrt(4.0 * k * (k + pa) * (k + pb) * (k + ab) / (m * m * (m + 1.0) * (m - 1.0)));
      }
      const double log_mu0 =
          (ab + 1.0) * std::log(2.0) + log_gamma(pa + 1.0) + log_gamma(pb + 1.0) - log_gamma(ab + 2.0);
      p0_ = std::exp(-0.5 * log_mu0);
      break;
    }
  }
}

bool Recurrence::in_support(double x) const {
  switch (spec_.kind) {
    case EnsembleKind::gue: return true;
    case EnsembleKind::lue: return x > 0.0 || (x == 0.0 && spec_.alpha == 0.0);
    case EnsembleKind::jue: return x > -1.0 && x < 1.0;
  }
  return false;
}

double Recurrence::log_weight(double x) const {
  switch (spec_.kind) {
    case EnsembleKind::gue: return -x * x;
    case EnsembleKind::lue: return (spec_.alpha == 0.0 ? 0.0 : spec_.alpha * std::log(x)) - x;
    case EnsembleKind::jue: {
      double lw = 0.0;
      if (spec_.a != 0.0) lw += spec_.a * std::log1p(-x);
      if (spec_.b != 0.0) lw += spec_.b * std::log1p(x);
      return lw;
    }
  }
  return 0.0;
}

void Recurrence::phi(double x, double* out) const {
  const int n = spec_.n;
  if (!std::isfinite(x)) throw DomainError("phi_values: non-finite abscissa");
  if (!in_support(x)) {
    for (int k = 0; k <= n; ++k) out[k] = 0.0;
    return;
  }
  constexpr double kBig = 1e150;
  const double kLogBig = std::log(kBig);
  const double half_lw = 0.5 * log_weight(x);
  double scale_log = 0.0;
  double prev = 0.0, cur = p0_;
  const double factor = std::exp(half_lw);
  bool log_mode = !(std::fabs(half_lw) < 300.0);
  for (int k = 0; k <= n; ++k) {
    out[k] = log_mode ? cur * std::exp(scale_log + half_lw) : cur * factor;
    if (k == n) break;
    double next = ((x - b_[k]) * cur - a_[k] * prev) / a_[k + 1];
    prev = cur;
    cur = next;
    if (std::fabs(cur) > kBig) {
      cur /= kBig;
      prev /= kBig;
      scale_log += kLogBig;
      log_mode = true;
    }
  }
}

std::vector<double> phi_values(const EnsembleSpec& spec, double x) {
  Recurrence rec(spec);
  std::vector<double> out(spec.n + 1);
  rec.phi(x, out.data());
  return out;
}

double cd_prefactor(const EnsembleSpec& spec) {
  Recurrence rec(spec);
  return -rec.offdiag(spec.n);
}

double cd_kernel_from_phi(double gamma, int n, double x, const double* phx, double y, const double* phy) {
  if (x > y) {
    std::swap(x, y);
    std::swap(phx, phy);
  }
  const double delta = 1e-5 * (1.0 + std::fabs(x) + std::fabs(y));
  if (y - x <= delta) {
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += phx[k] * phy[k];
    return sum;
  }
  return gamma * (phx[n - 1] * phy[n] - phx[n] * phy[n - 1]) / (x - y);
}

double cd_kernel(const EnsembleSpec& spec, double x, double y) {
  Recurrence rec(spec);
  std::vector<double> px(spec.n + 1), py(spec.n + 1);
  rec.phi(x, px.data());
  rec.phi(y, py.data());
  return cd_kernel_from_phi(-rec.offdiag(spec.n), spec.n, x, px.data(), y, py.data());
}

}  // namespace rmt
