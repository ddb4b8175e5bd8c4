#include "rmt/fredholm.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <utility>

#include "rmt/errors.hpp"
#include "rmt/parallel.hpp"
#include "rmt/specfun.hpp"

namespace rmt {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

LogDet log1p_sum(const Eigen::VectorXd& mu) {
  LogDet out;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (!(mu[i] < 1.0)) {
      out.value = kNegInf;
      out.nonpositive = true;
      return out;
    }
    out.value += std::log1p(-mu[i]);
  }
  return out;
}

void check_nodes(int m) {
  if (m < 1 || m > 4000) throw ParameterError("Nystrom node count out of range");
}

// Nystrom matrix for a polynomial kernel given phi rows at the nodes.
LogDet cd_logdet(const Recurrence& rec, const QuadratureRule& rule, double s) {
  const int n = rec.spec().n;
  const int m = static_cast<int>(rule.size());
  const int stride = n + 1;
  std::vector<double> ph(static_cast<std::size_t>(m) * stride);
  std::vector<double> sw(m);
  for (int i = 0; i < m; ++i) {
    rec.phi(rule.nodes[i], &ph[static_cast<std::size_t>(i) * stride]);
    sw[i] = std::sqrt(rule.weights[i]);
  }
  const double gamma = -rec.offdiag(n);
  std::vector<double> a(static_cast<std::size_t>(m) * m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i <= j; ++i) {
      const double k = cd_kernel_from_phi(gamma, n, rule.nodes[i], &ph[static_cast<std::size_t>(i) * stride],
                                          rule.nodes[j], &ph[static_cast<std::size_t>(j) * stride]);
      const double v = sw[i] * k * sw[j];
      a[static_cast<std::size_t>(j) * m + i] = v;
      a[static_cast<std::size_t>(i) * m + j] = v;
    }
  }
  return logdet_identity_minus(a, m, s);
}

const QuadratureRule& reference_rule(int m) {
  thread_local std::map<int, QuadratureRule> cache;
  auto it = cache.find(m);
  if (it == cache.end()) it = cache.emplace(m, gauss_legendre(m)).first;
  return it->second;
}

LogDet gap_logcdf_once(const EnsembleSpec& spec, double s, const NystromConfig& config, int m) {
  Recurrence rec(spec);
  if (spec.kind == EnsembleKind::jue) return jue_logdet(spec, s, m, true);
  if (spec.kind == EnsembleKind::lue && s <= 0.0) return {kNegInf, false};
  QuadratureRule rule;
  if (config.map == MapKind::semi_infinite) {
    rule = map_semi_infinite(map_affine(reference_rule(m), 0.0, 1.0), s);
  } else {
    rule = map_affine(reference_rule(m), s, s + truncation_length(spec, s, config));
  }
  return cd_logdet(rec, rule, s);
}

GapCurve make_curve(const std::vector<double>& grid, const std::vector<LogDet>& values, std::string method) {
  GapCurve c;
  c.s_grid = grid;
  c.method = std::move(method);
  c.F.resize(grid.size());
  c.logF.resize(grid.size());
  c.nonpositive.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double lf = std::min(values[i].value, 0.0);
    c.logF[i] = lf;
    c.F[i] = std::exp(lf);
    c.nonpositive[i] = values[i].nonpositive;
  }
  return c;
}

void check_grid(const std::vector<double>& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i])) throw InputError("grid contains a non-finite abscissa");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw InputError("grid must be strictly increasing");
  }
}

}  // namespace

LogDet logdet_identity_minus(std::vector<double>& a, int m, double s) {
  Eigen::Map<Eigen::MatrixXd> mat(a.data(), m, m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(mat, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    std::ostringstream os;
    os << "symmetric eigen-decomposition failed (size " << m << ", s = " << s << ")";
    throw NumericalError(os.str(), m, s);
  }
  return log1p_sum(solver.eigenvalues());
}

LogDet nystrom_logdet(const KernelOracle& kernel, const QuadratureRule& rule, double s) {
  const int m = static_cast<int>(rule.size());
  std::vector<double> sw(m);
  for (int i = 0; i < m; ++i) sw[i] = std::sqrt(rule.weights[i]);
  std::vector<double> a(static_cast<std::size_t>(m) * m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i <= j; ++i) {
      const double v = sw[i] * kernel.eval(rule.nodes[i], rule.nodes[j]) * sw[j];
      a[static_cast<std::size_t>(j) * m + i] = v;
      a[static_cast<std::size_t>(i) * m + j] = v;
    }
  }
  return logdet_identity_minus(a, m, s);
}

int default_nodes(const EnsembleSpec& spec) {
  switch (spec.kind) {
    case EnsembleKind::gue: return 120;
    case EnsembleKind::lue: return 240;
    case EnsembleKind::jue: return 120;
  }
  return 120;
}

double truncation_length(const EnsembleSpec& spec, double s, const NystromConfig& config) {
  if (spec.kind == EnsembleKind::jue) return 1.0 - s;
  double floor_len = config.min_length;
  double step = 0.25;
  if (spec.kind == EnsembleKind::gue) {
    if (floor_len <= 0.0) floor_len = 8.0;
  } else {
    if (floor_len <= 0.0) floor_len = 40.0;
    const double r1 = std::sqrt(static_cast<double>(spec.n)), r2 = std::sqrt(spec.n + spec.alpha);
    const double edge_scale = (r1 + r2) * std::cbrt(1.0 / r1 + 1.0 / r2);
    step = std::max(0.25, 0.25 * edge_scale);
  }
  Recurrence rec(spec);
  std::vector<double> ph(spec.n + 1);
  auto diag = [&](double x) {
    rec.phi(x, ph.data());
    double sum = 0.0;
    for (int k = 0; k < spec.n; ++k) sum += ph[k] * ph[k];
    return sum;
  };
  double max_diag = diag(s);
  double len = 0.0;
  for (int it = 0; it < 100000; ++it) {
    len += step;
    const double d = diag(s + len);
    max_diag = std::max(max_diag, d);
    if (len >= floor_len && d <= config.tail_ratio * max_diag) return len;
  }
  return len;
}

LogDet gap_logcdf(const EnsembleSpec& spec, double s, const NystromConfig& config) {
  spec.validate();
  if (!std::isfinite(s)) throw InputError("gap_logcdf: non-finite abscissa");
  if (spec.kind == EnsembleKind::jue) {
    if (s <= -1.0) return {kNegInf, false};
    if (s >= 1.0) return {0.0, false};
  }
  const int m = config.nodes > 0 ? config.nodes : default_nodes(spec);
  if (m < 16 || m > 2000) throw ParameterError("Nystrom resolution must lie in [16, 2000]");
  LogDet r = gap_logcdf_once(spec, s, config, m);
  if (r.nonpositive && 2 * m <= 2000) r = gap_logcdf_once(spec, s, config, 2 * m);
  return r;
}

GapCurve gap_cdf(const EnsembleSpec& spec, const std::vector<double>& s_grid, const NystromConfig& config) {
  check_grid(s_grid);
  std::vector<LogDet> values(s_grid.size());
  parallel_for(s_grid.size(), [&](std::size_t i) { values[i] = gap_logcdf(spec, s_grid[i], config); });
  return make_curve(s_grid, values, "fredholm-" + spec.label());
}

LogDet jue_logdet(const EnsembleSpec& spec, double s, int nodes, bool gram) {
  if (spec.kind != EnsembleKind::jue) throw ParameterError("jue_logdet requires a JUE spec");
  check_nodes(nodes);
  if (s <= -1.0) return {kNegInf, false};
  if (s >= 1.0) return {0.0, false};
  Recurrence rec(spec);
  const QuadratureRule rule = map_affine(reference_rule(nodes), s, 1.0);
  const int n = spec.n;
  Eigen::MatrixXd phi(nodes, n);
  std::vector<double> ph(n + 1);
  for (int i = 0; i < nodes; ++i) {
    rec.phi(rule.nodes[i], ph.data());
    const double sw = std::sqrt(rule.weights[i]);
    for (int k = 0; k < n; ++k) phi(i, k) = sw * ph[k];
  }
  Eigen::MatrixXd g = gram ? Eigen::MatrixXd(phi.transpose() * phi) : Eigen::MatrixXd(phi * phi.transpose());
  const int dim = static_cast<int>(g.rows());
  std::vector<double> a(g.data(), g.data() + g.size());
  return logdet_identity_minus(a, dim, s);
}

LogDet lue_lower_gap_logdet(const EnsembleSpec& spec, double t, int nodes) {
  if (spec.kind != EnsembleKind::lue) throw ParameterError("lue_lower_gap_logdet requires an LUE spec");
  check_nodes(nodes);
  if (t <= 0.0) return {0.0, false};
  Recurrence rec(spec);
  return cd_logdet(rec, map_affine(reference_rule(nodes), 0.0, t), t);
}

double airy_kernel(double s, double t) {
  if (s > t) std::swap(s, t);
  const AiryPair as = airy(s);
  if (s == t) return as.aip * as.aip - s * as.ai * as.ai;
  const AiryPair at = airy(t);
  if (std::fabs(s - t) < 1e-6)
    return 0.5 * (as.aip * as.aip - s * as.ai * as.ai + at.aip * at.aip - t * at.ai * at.ai);
  return (as.ai * at.aip - as.aip * at.ai) / (s - t);
}

LogDet airy_gap_logcdf(double x, int n_nodes) {
  check_nodes(n_nodes);
  if (!std::isfinite(x)) throw InputError("airy_gap_logcdf: non-finite abscissa");
  const QuadratureRule rule = map_semi_infinite(map_affine(reference_rule(n_nodes), 0.0, 1.0), x);
  const int m = n_nodes;
  std::vector<AiryPair> av(m);
  std::vector<double> sw(m), diag(m);
  for (int i = 0; i < m; ++i) {
    av[i] = airy(rule.nodes[i]);
    sw[i] = std::sqrt(rule.weights[i]);
    diag[i] = av[i].aip * av[i].aip - rule.nodes[i] * av[i].ai * av[i].ai;
  }
  std::vector<double> a(static_cast<std::size_t>(m) * m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i <= j; ++i) {
      const double si = rule.nodes[i], tj = rule.nodes[j];
      double k;
      if (i == j) k = diag[i];
      else if (std::fabs(si - tj) < 1e-6) k = 0.5 * (diag[i] + diag[j]);
      else k = (av[i].ai * av[j].aip - av[i].aip * av[j].ai) / (si - tj);
      const double v = sw[i] * k * sw[j];
      a[static_cast<std::size_t>(j) * m + i] = v;
      a[static_cast<std::size_t>(i) * m + j] = v;
    }
  }
  return logdet_identity_minus(a, m, x);
}

GapCurve airy_gap_cdf(const std::vector<double>& x_grid, int n_nodes) {
  check_grid(x_grid);
  std::vector<LogDet> values(x_grid.size());
  parallel_for(x_grid.size(), [&](std::size_t i) { values[i] = airy_gap_logcdf(x_grid[i], n_nodes); });
  return make_curve(x_grid, values, "fredholm-airy");
}

double bessel_kernel(double alpha, double x, double y) {
  auto off = [alpha](double u, double v) {
    const double su = std::sqrt(u), sv = std::sqrt(v);
    const BesselPair bu = bessel_j(alpha, su), bv = bessel_j(alpha, sv);
    return (bu.j * sv * bv.jp - su * bu.jp * bv.j) / (2.0 * (u - v));
  };
  if (x > y) std::swap(x, y);
  if (x != y) return off(x, y);
  double h = 1e-5 * (1.0 + x);
  if (x - h <= 0.0) h = 0.5 * x;
  return off(x - h, x + h);
}

LogDet bessel_gap_logcdf(double alpha, double s, int n_nodes) {
  check_nodes(n_nodes);
  if (!(alpha > -1.0)) throw ParameterError("Bessel kernel order must exceed -1");
  if (!(s > 0.0)) return {0.0, false};
  const QuadratureRule rule = map_affine(reference_rule(n_nodes), 0.0, s);
  const int m = n_nodes;
  std::vector<double> jv(m), jpv(m), rt(m), sw(m), diag(m);
  for (int i = 0; i < m; ++i) {
    const double x = rule.nodes[i];
    rt[i] = std::sqrt(x);
    const BesselPair bp = bessel_j(alpha, rt[i]);
    jv[i] = bp.j;
    jpv[i] = bp.jp;
    sw[i] = std::sqrt(rule.weights[i]);
    diag[i] = bessel_kernel(alpha, x, x);
  }
  std::vector<double> a(static_cast<std::size_t>(m) * m);
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i <= j; ++i) {
      double k;
      if (i == j) k = diag[i];
      else
        k = (jv[i] * rt[j] * jpv[j] - rt[i] * jpv[i] * jv[j]) / (2.0 * (rule.nodes[i] - rule.nodes[j]));
      const double v = sw[i] * k * sw[j];
      a[static_cast<std::size_t>(j) * m + i] = v;
      a[static_cast<std::size_t>(i) * m + j] = v;
    }
  }
  return logdet_identity_minus(a, m, s);
}

GapCurve bessel_gap_cdf(double alpha, const std::vector<double>& s_grid, int n_nodes) {
  check_grid(s_grid);
  std::vector<LogDet> values(s_grid.size());
  parallel_for(s_grid.size(), [&](std::size_t i) { values[i] = bessel_gap_logcdf(alpha, s_grid[i], n_nodes); });
  GapCurve c = make_curve(s_grid, values, "fredholm-bessel");
  return c;
}

}  // namespace rmt
