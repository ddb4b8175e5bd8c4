#include "rmt/edges.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rmt/errors.hpp"
#include "rmt/parallel.hpp"

namespace rmt {
namespace {

double bisect_cdf(const std::function<double(double)>& cdf, double lo, double hi, double target, double tol) {
  double flo = cdf(lo), fhi = cdf(hi);
  if (!(flo <= target && fhi >= target)) {
    std::ostringstream os;
    os << "quantile " << target << " not bracketed by [" << lo << ", " << hi << "] (F = " << flo << ", " << fhi << ")";
    throw CalibrationError(os.str());
  }
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (cdf(mid) < target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double EdgeComparison::max_abs_err() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < s_grid.size(); ++i) worst = std::max(worst, std::fabs(finite_n[i] - limit[i]));
  return worst;
}

EdgeComparison jue_hard_edge(int n, double a, double b, Edge edge, const std::vector<double>& s_grid,
                             int finite_nodes, int limit_nodes) {
  if (n < 2) throw ParameterError("jue_hard_edge requires N >= 2");
  if (!(a > -1.0 && b > -1.0)) throw ParameterError("jue_hard_edge requires a, b > -1");
  if (edge == Edge::left) {
    EdgeComparison c = jue_hard_edge(n, b, a, Edge::right, s_grid, finite_nodes, limit_nodes);
    c.edge = Edge::left;
    return c;
  }
  for (double s : s_grid)
    if (!(s >= 0.0 && s <= 15.0)) throw InputError("jue_hard_edge: s_grid must lie in [0, 15]");
  const EnsembleSpec spec = EnsembleSpec::jue(n, a, b);
  const double scale = 1.0 / (2.0 * n * static_cast<double>(n));
  EdgeComparison c;
  c.s_grid = s_grid;
  c.edge = Edge::right;
  c.bessel_order = a;
  c.finite_n.resize(s_grid.size());
  c.limit.resize(s_grid.size());
  parallel_for(s_grid.size(), [&](std::size_t i) {
    const double s = s_grid[i];
    c.finite_n[i] = s == 0.0 ? 1.0 : std::exp(jue_logdet(spec, 1.0 - s * scale, finite_nodes, true).value);
    c.limit[i] = s == 0.0 ? 1.0 : std::exp(bessel_gap_logcdf(a, s, limit_nodes).value);
  });
  return c;
}

EdgeComparison lue_hard_edge(int n, const std::vector<double>& s_grid, int finite_nodes, int limit_nodes) {
  if (n < 2) throw ParameterError("lue_hard_edge requires N >= 2");
  const EnsembleSpec spec = EnsembleSpec::lue(n, 0.0);
  EdgeComparison c;
  c.s_grid = s_grid;
  c.edge = Edge::left;
  c.bessel_order = 0.0;
  c.finite_n.resize(s_grid.size());
  c.limit.resize(s_grid.size());
  parallel_for(s_grid.size(), [&](std::size_t i) {
    const double s = s_grid[i];
    if (!(s >= 0.0)) throw InputError("lue_hard_edge: negative abscissa");
    c.finite_n[i] = s == 0.0 ? 1.0 : std::exp(lue_lower_gap_logdet(spec, s / (4.0 * n), finite_nodes).value);
    c.limit[i] = s == 0.0 ? 1.0 : std::exp(bessel_gap_logcdf(0.0, s, limit_nodes).value);
  });
  return c;
}

double interpolate(const GapCurve& c, double x) {
  const auto& g = c.s_grid;
  if (g.empty()) throw InputError("interpolate: empty curve");
  if (x <= g.front()) return c.F.front();
  if (x >= g.back()) return c.F.back();
  const std::size_t k = static_cast<std::size_t>(std::upper_bound(g.begin(), g.end(), x) - g.begin());
  const double w = (x - g[k - 1]) / (g[k] - g[k - 1]);
  return (1.0 - w) * c.F[k - 1] + w * c.F[k];
}

double TwStandardization::cdf(double x) const {
  if (x < f2.s_grid.front()) return 0.0;
  if (x > f2.s_grid.back()) return 1.0;
  return interpolate(f2, x);
}

TwStandardization tw_standardization(double x_lo, double x_hi, int n_nodes, double step) {
  if (!(x_lo <= -10.0 && x_hi >= 6.0)) throw ParameterError("tw_standardization: range must contain [-10, 6]");
  if (!(step > 0.0 && step <= 0.02)) throw ParameterError("tw_standardization: step must lie in (0, 0.02]");
  const int count = static_cast<int>(std::ceil((x_hi - x_lo) / step)) + 1;
  const double h = (x_hi - x_lo) / (count - 1);
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) grid[i] = x_lo + i * h;
  grid.back() = x_hi;
  TwStandardization tw;
  tw.f2 = airy_gap_cdf(grid, n_nodes);
  const auto& f = tw.f2.F;
  std::vector<double> dens(count);
  for (int i = 0; i < count; ++i) {
    if (i == 0) dens[i] = (f[1] - f[0]) / h;
    else if (i == count - 1) dens[i] = (f[i] - f[i - 1]) / h;
    else dens[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
  }
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (int i = 0; i + 1 < count; ++i) {
    const double x0 = grid[i], x1 = grid[i + 1];
    m0 += 0.5 * h * (dens[i] + dens[i + 1]);
    m1 += 0.5 * h * (x0 * dens[i] + x1 * dens[i + 1]);
    m2 += 0.5 * h * (x0 * x0 * dens[i] + x1 * x1 * dens[i + 1]);
  }
  tw.total_mass = m0;
  tw.mean = m1 / m0;
  tw.sd = std::sqrt(m2 / m0 - tw.mean * tw.mean);
  return tw;
}

Calibration calibrate_quantiles(const std::function<double(double)>& cdf, double lo, double hi,
                                const std::function<double(double)>& tw_cdf, const std::array<double, 3>& quantiles,
                                double x_step) {
  double sx = 0.0, ss = 0.0, sxx = 0.0, sxs = 0.0;
  for (double q : quantiles) {
    if (!(q > 0.0 && q < 1.0)) throw ParameterError("quantiles must lie in (0, 1)");
    const double s_q = bisect_cdf(cdf, lo, hi, q, 1e-9 * std::max(1.0, std::fabs(hi - lo)));
    const double x_q = bisect_cdf(tw_cdf, -8.0, 6.0, q, 1e-10);
    sx += x_q;
    ss += s_q;
    sxx += x_q * x_q;
    sxs += x_q * s_q;
  }
  const double k = static_cast<double>(quantiles.size());
  const double det = k * sxx - sx * sx;
  if (!(std::fabs(det) > 1e-14)) throw CalibrationError("quantile abscissae are degenerate");
  Calibration c;
  c.sigma = (k * sxs - sx * ss) / det;
  c.mu = (ss - c.sigma * sx) / k;
  if (!(c.sigma > 0.0)) throw CalibrationError("calibrated scale is not positive");
  const int count = static_cast<int>(std::round(12.0 / x_step)) + 1;
  std::vector<double> err(count);
  parallel_for(count, [&](std::size_t i) {
    const double x = -6.0 + 12.0 * static_cast<double>(i) / (count - 1);
    err[i] = std::fabs(cdf(c.mu + c.sigma * x) - tw_cdf(x));
  });
  c.max_err = *std::max_element(err.begin(), err.end());
  return c;
}

Calibration lue_soft_calibration(int n, double alpha, const std::array<double, 3>& quantiles,
                                 const NystromConfig& config, int airy_nodes, double x_step) {
  if (n < 10) throw ParameterError("lue_soft_calibration requires N >= 10");
  const EnsembleSpec spec = EnsembleSpec::lue(n, alpha);
  const double r1 = std::sqrt(static_cast<double>(n)), r2 = std::sqrt(n + alpha);
  const double mu = (r1 + r2) * (r1 + r2);
  const double scale = (r1 + r2) * std::cbrt(1.0 / r1 + 1.0 / r2);
  auto cdf = [&](double s) { return std::exp(gap_logcdf(spec, s, config).value); };
  auto tw = [airy_nodes](double x) { return std::exp(airy_gap_logcdf(x, airy_nodes).value); };
  return calibrate_quantiles(cdf, std::max(1e-6, mu - 8.0 * scale), mu + 8.0 * scale, tw, quantiles, x_step);
}

double kolmogorov_distance(const GapCurve& a, const GapCurve& b, double lo, double hi) {
  if (a.size() == 0 || b.size() == 0) throw InputError("kolmogorov_distance: empty curve");
  const double l = std::max({lo, a.s_grid.front(), b.s_grid.front()});
  const double h = std::min({hi, a.s_grid.back(), b.s_grid.back()});
  if (!(l <= h)) throw InputError("kolmogorov_distance: curves do not overlap on the range");
  const int count = std::max(2, static_cast<int>(std::ceil((h - l) / 0.01)) + 1);
  double worst = 0.0;
  for (int i = 0; i < count; ++i) {
    const double x = l + (h - l) * i / (count - 1.0);
    worst = std::max(worst, std::fabs(interpolate(a, x) - interpolate(b, x)));
  }
  return worst;
}

}  // namespace rmt
