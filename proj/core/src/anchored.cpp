#include "rmt/anchored.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rmt/errors.hpp"
#include "rmt/parallel.hpp"

namespace rmt {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double y_of_t(double t) { return -std::log1p(-t); }
double t_of_y(double y) { return -std::expm1(-y); }

// Integration variable of a form as a function of s.
double integration_var(const SigmaForm& form, double s) {
  const double x = form.x_of_s(s);
  return form.stretched ? y_of_t(x) : x;
}

double second_derivative(const SigmaForm& form, double x, double sg, double sp, int sign, bool freeze) {
  const double r = form.radicand(x, sg, sp);
  if (freeze && !(r > 0.0)) return 0.0;
  return sign * std::sqrt(r) / form.prefactor(x, sg, sp);
}

Rhs make_rhs(const SigmaForm& form, int sign, bool freeze) {
  if (form.stretched) {
    return [&form, sign, freeze](double, const double* u, double* du) {
      const double t = u[2];
      const double sp = u[1] / (1.0 - t);
      const double spp = second_derivative(form, t, u[0], sp, sign, freeze);
      du[0] = u[1];
      du[1] = (1.0 - t) * (1.0 - t) * spp - u[1];
      du[2] = 1.0 - t;
    };
  }
  return [&form, sign, freeze](double x, const double* u, double* du) {
    du[0] = u[1];
    du[1] = second_derivative(form, x, u[0], u[1], sign, freeze);
  };
}

std::vector<double> initial_state(const SigmaForm& form, const CauchyData& cd) {
  if (form.stretched) return {cd.sigma, (1.0 - cd.x) * cd.sigma_prime, cd.x};
  return {cd.sigma, cd.sigma_prime};
}

// Form variable x and sigma from an integration state at integration variable v.
std::pair<double, double> form_point(const SigmaForm& form, double v, const double* u) {
  if (form.stretched) return {t_of_y(v), u[0]};
  return {v, u[0]};
}

double radicand_at_state(const SigmaForm& form, double v, const double* u) {
  if (form.stretched) {
    const double t = u[2];
    return form.radicand(t, u[0], u[1] / (1.0 - t));
  }
  return form.radicand(v, u[0], u[1]);
}

CauchyData cauchy(const SigmaForm& form, const AnchorDatum& d) {
  return form.from_log_cdf(d.s, d.c[1], 2.0 * d.c[2], 6.0 * d.c[3]);
}

std::vector<double> uniform_desc(double hi, double lo, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = (count == 1) ? hi : hi - (hi - lo) * i / (count - 1.0);
  v.front() = hi;
  v.back() = lo;
  return v;
}

}  // namespace

AnchorDatum extract_anchor(const EnsembleSpec& spec, double s, double stencil_halfwidth, int stencil_points,
                           const NystromConfig& config) {
  if (stencil_points < 7 || stencil_points % 2 == 0) throw ParameterError("stencil needs an odd number >= 7 of points");
  if (!(stencil_halfwidth > 0.0)) throw ParameterError("stencil half-width must be positive");
  const int m = stencil_points;
  Eigen::MatrixXd v(m, 5);
  Eigen::VectorXd g(m);
  for (int i = 0; i < m; ++i) {
    const double r = -1.0 + 2.0 * i / (m - 1.0);
    const LogDet ld = gap_logcdf(spec, s + stencil_halfwidth * r, config);
    if (!std::isfinite(ld.value) || ld.value < std::log(1e-280)) {
      std::ostringstream os;
      os << "anchor at s = " << s << ": log F not resolvable on the stencil (" << ld.value << ")";
      throw AnchorPlacementError(os.str(), -1, s);
    }
    double p = 1.0;
    for (int k = 0; k < 5; ++k) {
      v(i, k) = p;
      p *= r;
    }
    g[i] = std::min(ld.value, 0.0);
  }
  const Eigen::VectorXd coef = v.colPivHouseholderQr().solve(g);
  const Eigen::VectorXd res = v * coef - g;
  AnchorDatum d;
  d.s = s;
  double scale = 1.0;
  for (int k = 0; k < 5; ++k) {
    d.c[k] = coef[k] / scale;
    scale *= stencil_halfwidth;
  }
  d.F = std::exp(d.c[0]);
  d.sigma = d.c[1];
  d.sigma_prime = 2.0 * d.c[2];
  d.sigma_second = 6.0 * d.c[3];
  d.fit_rms = std::sqrt(res.squaredNorm() / m);
  d.ill_conditioned = d.fit_rms > 1e-6;
  return d;
}

int branch_sign(double second_derivative, double eps_init) {
  if (!(std::fabs(second_derivative) > eps_init)) return 1;
  return second_derivative > 0.0 ? 1 : -1;
}

int branch_sign(const AnchorDatum& datum, double eps_init) { return branch_sign(datum.sigma_second, eps_init); }

Window auto_window(const EnsembleSpec& spec, const NystromConfig& config) {
  spec.validate();
  switch (spec.kind) {
    case EnsembleKind::gue: {
      const double c = std::sqrt(2.0 * spec.n);
      const double width = spec.n <= 10 ? 7.0 : (spec.n < 100 ? 6.4 : 6.0);
      return {c - 0.5 * width, c + 0.5 * width};
    }
    case EnsembleKind::lue: {
      const double mu = std::pow(std::sqrt(static_cast<double>(spec.n)) + std::sqrt(spec.n + spec.alpha), 2.0);
      const double half = 6.0 * std::cbrt(static_cast<double>(spec.n));
      return {std::max(mu - half, 1e-3 * mu), mu + half};
    }
    case EnsembleKind::jue: {
      const double target_lo = std::log(0.1), target_hi = std::log1p(-1e-8);
      double lo = -1.0, hi = 1.0;
      while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        if (gap_logcdf(spec, mid, config).value < target_lo) lo = mid;
        else hi = mid;
      }
      const double s_min = 0.5 * (lo + hi);
      // The upper target sits within ~1e-10 of the hard edge, so it is resolved in y = -log((1 - s) / 2).
      auto s_of_y = [](double y) { return 1.0 - 2.0 * std::exp(-y); };
      double ylo = -std::log(0.5 * (1.0 - s_min)), yhi = -std::log(0.5e-14);
      if (gap_logcdf(spec, s_of_y(yhi), config).value < target_hi) throw WindowError("JUE window target unreachable");
      while (yhi - ylo > 1e-6) {
        const double mid = 0.5 * (ylo + yhi);
        if (gap_logcdf(spec, s_of_y(mid), config).value < target_hi) ylo = mid;
        else yhi = mid;
      }
      return {s_min, s_of_y(0.5 * (ylo + yhi))};
    }
  }
  throw ParameterError("unknown ensemble");
}

std::vector<double> anchor_points(const SigmaForm& form, Window window, int n_anchors) {
  if (n_anchors < 2) throw ParameterError("need at least two anchors");
  if (!(window.s_min < window.s_max)) throw ParameterError("window must satisfy s_min < s_max");
  if (!form.stretched) return uniform_desc(window.s_max, window.s_min, n_anchors);
  const double y_hi = y_of_t(form.x_of_s(window.s_max)), y_lo = y_of_t(form.x_of_s(window.s_min));
  std::vector<double> y = uniform_desc(y_hi, y_lo, n_anchors);
  std::vector<double> s(n_anchors);
  for (int i = 0; i < n_anchors; ++i) s[i] = form.s_of_x(t_of_y(y[i]));
  s.front() = window.s_max;
  s.back() = window.s_min;
  return s;
}

AnchoredRun anchored_cdf(const EnsembleSpec& spec, const SigmaForm& form, Window window,
                         const AnchoredOptions& options) {
  if (options.grid_size < 2) throw ParameterError("grid_size must be at least 2");
  const std::vector<double> s_anchor = anchor_points(form, window, options.n_anchors);
  const int na = options.n_anchors;
  // Stencil half-width from the local anchor spacing.
  std::vector<double> halfwidth(na);
  for (int j = 0; j < na; ++j) {
    double spacing = std::numeric_limits<double>::infinity();
    if (j > 0) spacing = std::min(spacing, s_anchor[j - 1] - s_anchor[j]);
    if (j + 1 < na) spacing = std::min(spacing, s_anchor[j] - s_anchor[j + 1]);
    halfwidth[j] = options.stencil_halfwidth > 0.0 ? options.stencil_halfwidth : std::min(0.15, spacing / 3.0);
  }

  AnchoredRun run;
  run.form_label = form.label;
  run.anchors.resize(na);
  parallel_for(na, [&](std::size_t j) {
    run.anchors[j] = extract_anchor(spec, s_anchor[j], halfwidth[j], options.stencil_points, options.nystrom);
  });

  // Global descending grid: uniform points plus the anchors themselves.
  std::vector<double> grid = uniform_desc(window.s_max, window.s_min, options.grid_size);
  const double tol = 1e-9 * (window.s_max - window.s_min);
  for (double s : s_anchor) {
    bool dup = false;
    for (double& g : grid) {
      if (std::fabs(g - s) <= tol) {
        g = s;
        dup = true;
        break;
      }
    }
    if (!dup) grid.push_back(s);
  }
  std::sort(grid.begin(), grid.end(), std::greater<double>());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  run.grid = grid;
  const std::size_t ng = grid.size();
  run.sigma_on_grid.assign(ng, kNaN);
  run.anchor_index.resize(na);
  for (int j = 0; j < na; ++j) {
    run.anchor_index[j] = static_cast<std::size_t>(std::find(grid.begin(), grid.end(), s_anchor[j]) - grid.begin());
    run.sigma_on_grid[run.anchor_index[j]] = run.anchors[j].sigma;
  }

  const std::size_t dim = form.stretched ? 3 : 2;
  std::vector<double> u(dim);
  for (int j = 0; j + 1 < na; ++j) {
    const CauchyData cd = cauchy(form, run.anchors[j]);
    const int sign = branch_sign(cd.sigma_second, options.eps_init);
    run.branch_signs.push_back(sign);
    IvpProblem pb;
    pb.rhs = make_rhs(form, sign, true);
    pb.s_start = integration_var(form, s_anchor[j]);
    pb.s_end = integration_var(form, s_anchor[j + 1]);
    pb.state0 = initial_state(form, cd);
    pb.rtol = options.rtol;
    pb.atol = options.atol;
    IvpSolution sol = integrate(pb);
    if (sol.terminated_early() && options.truncate_on_failure) {
      run.failed_interval = j;
      run.branch_signs.pop_back();
      run.anchors.resize(j + 1);
      run.anchor_index.resize(j + 1);
      const std::size_t keep = run.anchor_index[j] + 1;
      run.grid.resize(keep);
      run.sigma_on_grid.resize(keep);
      break;
    }
    if (sol.terminated_early()) {
      std::ostringstream os;
      os << "branch failure on anchor interval " << j << " [" << s_anchor[j + 1] << ", " << s_anchor[j]
         << "]: integration stopped at " << sol.s_reached();
      throw BranchFailureError(os.str(), j, form.stretched ? form.s_of_x(t_of_y(sol.s_reached())) : sol.s_reached());
    }
    bool fired = false;
    const auto& pts = sol.step_points();
    const auto& sts = sol.step_states();
    for (std::size_t k = 0; k < pts.size(); ++k)
      if (!(radicand_at_state(form, pts[k], &sts[k * dim]) > 0.0)) fired = true;
    for (std::size_t k = run.anchor_index[j] + 1; k < run.anchor_index[j + 1]; ++k) {
      const double v = integration_var(form, grid[k]);
      sol.sample(v, u.data());
      if (!(radicand_at_state(form, v, u.data()) > 0.0)) fired = true;
      const auto [x, sg] = form_point(form, v, u.data());
      run.sigma_on_grid[k] = form.log_derivative(form.stretched ? form.x_of_s(grid[k]) : x, sg);
    }
    run.freeze_fired.push_back(fired);
    run.segments.push_back(std::move(sol));
  }

  const std::size_t ng_done = run.grid.size();
  grid.resize(ng_done);
  run.logF_on_grid.assign(ng_done, 0.0);
  run.F_on_grid.assign(ng_done, 0.0);
  run.logF_on_grid[0] = run.anchors[0].c[0];
  for (std::size_t k = 0; k + 1 < ng_done; ++k)
    run.logF_on_grid[k + 1] =
        run.logF_on_grid[k] - 0.5 * (run.sigma_on_grid[k] + run.sigma_on_grid[k + 1]) * (grid[k] - grid[k + 1]);
  for (std::size_t k = 0; k < ng_done; ++k) run.F_on_grid[k] = std::clamp(std::exp(run.logF_on_grid[k]), 0.0, 1.0);
  return run;
}

GapCurve fredholm_on_run_grid(const EnsembleSpec& spec, const AnchoredRun& run, const NystromConfig& config) {
  std::vector<double> inc(run.grid.rbegin(), run.grid.rend());
  return gap_cdf(spec, inc, config);
}

double max_abs_error(const AnchoredRun& run, const GapCurve& fredholm_on_grid) {
  const std::size_t ng = run.grid.size();
  if (fredholm_on_grid.size() != ng) throw InputError("reference curve does not match the run grid");
  double worst = 0.0;
  for (std::size_t k = 0; k < ng; ++k) worst = std::max(worst, std::fabs(run.F_on_grid[k] - fredholm_on_grid.F[ng - 1 - k]));
  return worst;
}

DirectIvpReport direct_ivp_from_data(const SigmaForm& form, const AnchorDatum& datum, Window window, int grid_size,
                                     const std::function<double(double)>& reference) {
  if (grid_size < 2) throw ParameterError("grid_size must be at least 2");
  if (!(datum.s > window.s_min && datum.s < window.s_max)) throw ParameterError("anchor must lie inside the window");
  const CauchyData cd = cauchy(form, datum);
  const int sign = branch_sign(cd.sigma_second, 1e-9);
  const std::size_t dim = form.stretched ? 3 : 2;
  auto run_dir = [&](double s_end) {
    IvpProblem pb;
    pb.rhs = make_rhs(form, sign, false);
    pb.s_start = integration_var(form, datum.s);
    pb.s_end = integration_var(form, s_end);
    pb.state0 = initial_state(form, cd);
    return integrate(pb);
  };
  const IvpSolution fwd = run_dir(window.s_max);
  const IvpSolution bwd = run_dir(window.s_min);
  auto s_of_v = [&](double v) { return form.stretched ? form.s_of_x(t_of_y(v)) : v; };

  DirectIvpReport rep;
  rep.forward_terminated = fwd.terminated_early();
  rep.backward_terminated = bwd.terminated_early();
  rep.forward_frontier = s_of_v(fwd.s_reached());
  rep.backward_frontier = s_of_v(bwd.s_reached());

  std::vector<double> grid;
  for (double s : uniform_desc(window.s_max, window.s_min, grid_size))
    if (s <= rep.forward_frontier && s >= rep.backward_frontier && s != datum.s) grid.push_back(s);
  grid.push_back(datum.s);
  std::sort(grid.begin(), grid.end());
  const std::size_t ng = grid.size();
  const std::size_t i0 = static_cast<std::size_t>(std::find(grid.begin(), grid.end(), datum.s) - grid.begin());
  std::vector<double> sig(ng), logf(ng);
  std::vector<double> u(dim);
  for (std::size_t k = 0; k < ng; ++k) {
    const double v = integration_var(form, grid[k]);
    const IvpSolution& sol = grid[k] >= datum.s ? fwd : bwd;
    sol.sample(v, u.data());
    sig[k] = form.log_derivative(form.stretched ? form.x_of_s(grid[k]) : v, u[0]);
  }
  sig[i0] = datum.sigma;
  logf[i0] = datum.c[0];
  for (std::size_t k = i0; k + 1 < ng; ++k) logf[k + 1] = logf[k] + 0.5 * (sig[k] + sig[k + 1]) * (grid[k + 1] - grid[k]);
  for (std::size_t k = i0; k > 0; --k) logf[k - 1] = logf[k] - 0.5 * (sig[k] + sig[k - 1]) * (grid[k] - grid[k - 1]);

  rep.curve.s_grid = grid;
  rep.curve.method = "direct-ivp-" + form.label;
  rep.curve.logF = logf;
  rep.curve.F.resize(ng);
  rep.curve.nonpositive.assign(ng, false);
  rep.max_abs_error = reference ? 0.0 : kNaN;
  for (std::size_t k = 0; k < ng; ++k) {
    const double f = std::isfinite(logf[k]) ? std::exp(logf[k]) : kNaN;
    rep.curve.F[k] = f;
    if (reference) {
      const double e = std::fabs(f - reference(grid[k]));
      rep.max_abs_error = std::isfinite(e) ? std::max(rep.max_abs_error, e) : std::numeric_limits<double>::infinity();
    }
  }
  return rep;
}

DirectIvpReport direct_ivp_demo(const EnsembleSpec& spec, const SigmaForm& form, double s0, Window window,
                                const NystromConfig& config, int grid_size) {
  const AnchorDatum d = extract_anchor(spec, s0, 0.15, 9, config);
  auto ref = [&](double s) { return std::exp(gap_logcdf(spec, s, config).value); };
  return direct_ivp_from_data(form, d, window, grid_size, ref);
}

double okamoto_hamiltonian(int n, double s, double q, double p) { return (2.0 * p - q - 2.0 * s) * p * q + n * q; }

IvpSolution okamoto_hamiltonian_ivp(int n, double s0, double q0, double p0, double s_target, double rtol) {
  if (n < 1) throw ParameterError("okamoto_hamiltonian_ivp requires n >= 1");
  const double alpha1 = 0.0, alpha2 = -static_cast<double>(n);
  IvpProblem pb;
  pb.rhs = [alpha1, alpha2](double t, const double* y, double* dy) {
    const double q = y[0], p = y[1];
    dy[0] = q * (4.0 * p - q - 2.0 * t) - 2.0 * alpha1;
    dy[1] = 2.0 * p * (q + t - p) + alpha2;
  };
  pb.s_start = s0;
  pb.s_end = s_target;
  pb.state0 = {q0, p0};
  pb.rtol = rtol;
  pb.atol = 1e-14;
  return integrate(pb);
}

std::pair<double, double> okamoto_initial_data(int n, const AnchorDatum& datum) {
  const double s = datum.s, h = datum.sigma, pq = -0.5 * datum.sigma_prime;
  const double qa = n - pq, qb = -(2.0 * s * pq + h), qc = 2.0 * pq * pq;
  std::vector<double> roots;
  if (std::fabs(qa) < 1e-300) {
    if (qb != 0.0) roots.push_back(-qc / qb);
  } else {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) throw NumericalError("okamoto_initial_data: no real (q, p) matches the anchor", -1, s);
    const double sq = std::sqrt(disc);
    const double r1 = (-qb - std::copysign(sq, qb)) / (2.0 * qa);
    roots.push_back(r1);
    if (r1 != 0.0) roots.push_back(qc / (qa * r1));
  }
  double best_q = kNaN, best_p = kNaN, best_err = std::numeric_limits<double>::infinity();
  for (double q : roots) {
    if (q == 0.0 || !std::isfinite(q)) continue;
    const double p = pq / q;
    const double hpp = -2.0 * q * (pq + 2.0 * p * p - n);
    const double err = std::fabs(hpp - datum.sigma_second);
    if (err < best_err) {
      best_err = err;
      best_q = q;
      best_p = p;
    }
  }
  if (!std::isfinite(best_q)) throw NumericalError("okamoto_initial_data: degenerate anchor", -1, s);
  return {best_q, best_p};
}

}  // namespace rmt
