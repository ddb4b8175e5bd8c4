// End-to-end acceptance runs. Prints one PASS/FAIL line per criterion and exits nonzero on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "rmt/anchored.hpp"
#include "rmt/edges.hpp"
#include "rmt/fredholm.hpp"
#include "rmt/montecarlo.hpp"
#include "rmt/orthopoly.hpp"
#include "rmt/quadrature.hpp"
#include "rmt/sigmaode.hpp"

namespace {

using rmt::EnsembleSpec;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (ok ? "" : " [miss]");
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string fix(double v, int d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", d, v);
  return buf;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1.0);
  v.back() = hi;
  return v;
}

bool in_band(double value, double reference) {
  const double r = value / reference;
  return r >= 0.5 && r <= 2.0;
}

std::string band(const std::string& label, double value, double reference) {
  return label + " " + sci(value) + " vs " + sci(reference) + " (ratio " + fix(value / reference, 3) + ")";
}

Outcome tracy_widom() {
  Outcome o;
  const auto x = linspace(-8.0, 4.0, 1201);
  const auto fred = rmt::airy_gap_cdf(x, 80);
  const auto pii = rmt::tw_cdf_from_q(rmt::hastings_mcleod(8.0, -8.0), x, 8.0);
  double err = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) err = std::max(err, std::fabs(fred.F[i] - pii.F[i]));
  o.require(err <= 3e-4, "max |F_PII - F_Fred| = " + sci(err) + " <= 3e-4");
  return o;
}

double anchored_error(const EnsembleSpec& spec, const rmt::SigmaForm& form, rmt::Window w, rmt::AnchoredOptions opt) {
  const auto run = rmt::anchored_cdf(spec, form, w, opt);
  return rmt::max_abs_error(run, rmt::fredholm_on_run_grid(spec, run, opt.nystrom));
}

Outcome gue_piv() {
  Outcome o;
  const std::pair<int, double> rows[] = {{5, 1.01e-3}, {10, 6.83e-4}, {20, 8.84e-4}, {100, 1.43e-3}};
  for (const auto& [n, ref] : rows) {
    const auto spec = EnsembleSpec::gue(n);
    const auto w = rmt::auto_window(spec);
    rmt::AnchoredOptions opt;
    opt.n_anchors = static_cast<int>(std::lround(80.0 * (w.s_max - w.s_min) / 6.0));
    const double err = anchored_error(spec, rmt::sigma_piv(n), w, opt);
    o.require(in_band(err, ref), band("n=" + std::to_string(n), err, ref));
  }
  return o;
}

Outcome lue_pv() {
  Outcome o;
  struct Row {
    int n;
    double alpha, ref;
    int nodes, anchors;
  };
  const Row rows[] = {{100, 5, 1.54e-4, 280, 101}, {50, 2, 1.99e-4, 260, 91}, {20, 0, 2.87e-4, 240, 81}, {10, 0, 5.95e-4, 220, 61}};
  for (const auto& r : rows) {
    const auto spec = EnsembleSpec::lue(r.n, r.alpha);
    rmt::AnchoredOptions opt;
    opt.n_anchors = r.anchors;
    opt.nystrom.nodes = r.nodes;
    const auto w = rmt::auto_window(spec, opt.nystrom);
    const double err = anchored_error(spec, rmt::sigma_pv(r.n, r.alpha), w, opt);
    o.require(in_band(err, r.ref), band("N=" + std::to_string(r.n), err, r.ref));
    if (r.n == 100) {
      const double dev = std::max(std::fabs(w.s_min / 382.089 - 1.0), std::fabs(w.s_max / 437.789 - 1.0));
      o.require(dev <= 5e-3, "window (" + fix(w.s_min, 3) + ", " + fix(w.s_max, 3) + ") rel dev " + sci(dev));
    }
  }
  return o;
}

Outcome jue_pvi() {
  Outcome o;
  const auto spec = EnsembleSpec::jue(20, 0.0, 0.0);
  rmt::AnchoredOptions opt;
  opt.n_anchors = 81;
  const double err = anchored_error(spec, rmt::sigma_pvi(20, 0.0, 0.0), rmt::auto_window(spec), opt);
  o.require(err <= 1e-2, "max error " + sci(err) + " <= 1e-2");
  return o;
}

Outcome jue_hard() {
  Outcome o;
  const auto grid = linspace(0.0, 15.0, 61);
  const std::pair<int, double> rows[] = {{20, 6.77e-4}, {40, 1.69e-4}, {80, 4.23e-5}, {120, 1.88e-5}, {300, 4.25e-6}};
  for (const auto& [n, ref] : rows) {
    const double err = rmt::jue_hard_edge(n, 0.0, 0.0, rmt::Edge::right, grid).max_abs_err();
    o.require(in_band(err, ref), band("(0,0) N=" + std::to_string(n), err, ref));
  }
  struct Row {
    double a, b;
    rmt::Edge edge;
    double ref;
    const char* label;
  };
  const Row rows300[] = {{2, 0, rmt::Edge::right, 4.03e-3, "(2,0) right"}, {2, 0, rmt::Edge::left, 2.45e-3, "(2,0) left"},
                         {0, 3, rmt::Edge::right, 3.66e-3, "(0,3) right"}, {0, 3, rmt::Edge::left, 2.88e-3, "(0,3) left"},
                         {2, 3, rmt::Edge::right, 1.01e-2, "(2,3) right"}, {2, 3, rmt::Edge::left, 4.82e-3, "(2,3) left"}};
  for (const auto& r : rows300) {
    const double err = rmt::jue_hard_edge(300, r.a, r.b, r.edge, grid).max_abs_err();
    o.require(in_band(err, r.ref), band(std::string("N=300 ") + r.label, err, r.ref));
  }
  const auto left = rmt::jue_hard_edge(80, 0.0, 0.0, rmt::Edge::left, grid);
  const auto right = rmt::jue_hard_edge(80, 0.0, 0.0, rmt::Edge::right, grid);
  o.require(left.finite_n == right.finite_n && left.limit == right.limit, "(0,0) left == right");
  return o;
}

Outcome lue_hard() {
  Outcome o;
  const auto grid = linspace(0.5, 10.0, 61);
  const std::pair<int, double> rows[] = {{20, 5e-4}, {40, 5e-5}, {80, 5e-5}};
  for (const auto& [n, bound] : rows) {
    const double err = rmt::lue_hard_edge(n, grid).max_abs_err();
    o.require(err <= bound, "N=" + std::to_string(n) + " " + sci(err) + " <= " + sci(bound));
  }
  return o;
}

Outcome lue_soft() {
  Outcome o;
  const auto c = rmt::lue_soft_calibration(500, 0.0);
  const double dm = std::fabs(c.mu / 1999.86 - 1.0), ds = std::fabs(c.sigma / 19.85 - 1.0);
  o.require(dm <= 5e-3, "mu " + fix(c.mu, 3) + " rel dev " + sci(dm));
  o.require(ds <= 2e-2, "sigma " + fix(c.sigma, 3) + " rel dev " + sci(ds));
  o.require(c.max_err <= 3e-3, "max error " + sci(c.max_err) + " <= 3e-3");
  return o;
}

Outcome jue_mc() {
  Outcome o;
  const auto tw = rmt::tw_standardization();
  struct Row {
    int n, m;
    double mean, sd, sd_scaled;
  };
  const Row rows[] = {{100, 2000, 0.94534, 0.00346, 0.07451}, {200, 5000, 0.94782, 0.00214, 0.07316}};
  for (const auto& r : rows) {
    rmt::McConfig cfg;
    cfg.N = r.n;
    cfg.n1 = 2 * r.n;
    cfg.n2 = 3 * r.n;
    cfg.M = r.m;
    const auto s = rmt::mc_summary(rmt::sample_theta_max(cfg), r.n, tw);
    const std::string tag = "N=" + std::to_string(r.n) + ",M=" + std::to_string(r.m) + " ";
    const double tol = 3.0 * r.sd / std::sqrt(static_cast<double>(r.m));
    o.require(std::fabs(s.mean - r.mean) <= tol, tag + "mean " + fix(s.mean, 5) + " (tol " + sci(tol) + ")");
    const double dsd = std::fabs(s.sd_scaled / r.sd_scaled - 1.0);
    o.require(dsd <= 0.1, tag + "sd N^{2/3} " + fix(s.sd_scaled, 5) + " rel dev " + sci(dsd));
    o.require(s.kolmogorov <= 0.03, tag + "Delta " + fix(s.kolmogorov, 4));
  }
  return o;
}

Outcome instability() {
  Outcome o;
  for (int n : {20, 100}) {
    const auto spec = EnsembleSpec::gue(n);
    const auto rep = rmt::direct_ivp_demo(spec, rmt::sigma_piv(n), std::sqrt(2.0 * n), rmt::auto_window(spec));
    const bool failed = rep.forward_terminated || rep.backward_terminated || rep.max_abs_error >= 0.1;
    o.require(failed, "direct n=" + std::to_string(n) + " frontiers [" + fix(rep.backward_frontier, 3) + ", " +
                          fix(rep.forward_frontier, 3) + "]");
  }
  const auto d = rmt::extract_anchor(EnsembleSpec::gue(20), 6.4, 0.05, 9);
  const auto [q0, p0] = rmt::okamoto_initial_data(20, d);
  const auto sol = rmt::okamoto_hamiltonian_ivp(20, 6.4, q0, p0, 5.0);
  o.require(sol.terminated_early() && sol.s_reached() > 5.0,
            std::string("Hamiltonian n=20 backward ") + (sol.terminated_early() ? "terminated" : "reached 5.0") +
                " at s=" + fix(sol.s_reached(), 4));
  return o;
}

Outcome perturbations() {
  Outcome o;
  const auto spec = EnsembleSpec::gue(20);
  const auto w = rmt::auto_window(spec);
  rmt::AnchoredOptions opt;
  opt.n_anchors = static_cast<int>(std::lround(80.0 * (w.s_max - w.s_min) / 6.0));
  opt.truncate_on_failure = true;
  const auto exact = rmt::anchored_cdf(spec, rmt::sigma_piv(20), w, opt);
  const auto fred = rmt::fredholm_on_run_grid(spec, exact, {});
  const std::size_t ng = exact.grid.size();
  const std::pair<const char*, rmt::PivVariant> variants[] = {
      {"shift_001", rmt::PivVariant::shift_001}, {"alt_A", rmt::PivVariant::alt_A}, {"alt_B", rmt::PivVariant::alt_B}};
  for (const auto& [name, v] : variants) {
    const auto run = rmt::anchored_cdf(spec, rmt::sigma_piv_perturbed(20, v), w, opt);
    double vs_exact = 0.0, vs_fred = 0.0;
    for (std::size_t k = 0; k < run.grid.size(); ++k) {
      vs_exact = std::max(vs_exact, std::fabs(run.F_on_grid[k] - exact.F_on_grid[k]));
      vs_fred = std::max(vs_fred, std::fabs(run.F_on_grid[k] - fred.F[ng - 1 - k]));
    }
    if (v == rmt::PivVariant::shift_001) o.require(vs_exact <= 1e-3, "shift_001 vs exact " + sci(vs_exact));
    else o.require(vs_fred >= 5e-3, std::string(name) + " vs Fredholm " + sci(vs_fred));
  }
  return o;
}

Outcome oracles() {
  Outcome o;
  double worst = 0.0;
  for (double s : {-1.5, 0.0, 1.2}) worst = std::max(worst, std::fabs(std::exp(rmt::gap_logcdf(EnsembleSpec::gue(1), s, {}).value) - 0.5 * (1 + std::erf(s))));
  for (double s : {0.3, 2.0, 6.0}) worst = std::max(worst, std::fabs(std::exp(rmt::gap_logcdf(EnsembleSpec::lue(1, 0.0), s, {}).value) + std::expm1(-s)));
  for (double s : {-0.6, 0.1, 0.9}) worst = std::max(worst, std::fabs(std::exp(rmt::gap_logcdf(EnsembleSpec::jue(1, 0.0, 0.0), s, {}).value) - 0.5 * (1 + s)));
  o.require(worst <= 1e-8, "closed forms " + sci(worst));

  double quad = 0.0;
  for (int n : {5, 16, 64}) {
    const auto r = rmt::gauss_legendre(n);
    for (int k = 0; k < 2 * n; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) acc += r.weights[i] * std::pow(r.nodes[i], k);
      quad = std::max(quad, std::fabs(acc - (k % 2 ? 0.0 : 2.0 / (k + 1))));
    }
  }
  o.require(quad <= 1e-12, "quadrature " + sci(quad));

  double cd = 0.0, ortho = 0.0;
  const EnsembleSpec specs[] = {EnsembleSpec::gue(8), EnsembleSpec::lue(6, 1.0), EnsembleSpec::jue(6, 2.0, 1.0)};
  for (const auto& spec : specs) {
    const double lo = spec.kind == rmt::EnsembleKind::gue ? -12.0 : spec.kind == rmt::EnsembleKind::lue ? 0.0 : -1.0;
    const double hi = spec.kind == rmt::EnsembleKind::gue ? 12.0 : spec.kind == rmt::EnsembleKind::lue ? 100.0 : 1.0;
    const auto rule = rmt::map_affine(rmt::gauss_legendre(400), lo, hi);
    std::vector<double> g((spec.n + 1) * (spec.n + 1), 0.0);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const auto ph = rmt::phi_values(spec, rule.nodes[i]);
      for (int j = 0; j <= spec.n; ++j)
        for (int k = 0; k <= spec.n; ++k) g[j * (spec.n + 1) + k] += rule.weights[i] * ph[j] * ph[k];
    }
    for (int j = 0; j <= spec.n; ++j)
      for (int k = 0; k <= spec.n; ++k) ortho = std::max(ortho, std::fabs(g[j * (spec.n + 1) + k] - (j == k)));
    for (int t = 1; t < 20; ++t) {
      const double x = lo + (hi - lo) * t / 20.0, y = lo + (hi - lo) * (20 - t) / 21.0;
      const auto px = rmt::phi_values(spec, x), py = rmt::phi_values(spec, y);
      double sum = 0.0;
      for (int k = 0; k < spec.n; ++k) sum += px[k] * py[k];
      cd = std::max(cd, std::fabs(rmt::cd_kernel(spec, x, y) - sum));
    }
  }
  o.require(cd <= 1e-11, "CD vs sum " + sci(cd));
  o.require(ortho <= 1e-9, "orthonormality " + sci(ortho));

  const auto piv = rmt::sigma_piv(1);
  double res = 0.0;
  for (double s = -1.0; s <= 2.0; s += 0.1) {
    const double f = 0.5 * (1 + std::erf(s)), f1 = std::exp(-s * s) / std::sqrt(std::numbers::pi);
    const double g1 = f1 / f, f2 = -2 * s * f1, f3 = (4 * s * s - 2) * f1;
    const double g2 = f2 / f - g1 * g1, g3 = f3 / f - 3 * f2 * f1 / (f * f) + 2 * g1 * g1 * g1;
    const auto c = piv.from_log_cdf(s, g1, g2, g3);
    const double lhs = piv.prefactor(c.x, c.sigma, c.sigma_prime) * c.sigma_second;
    res = std::max(res, std::fabs(lhs * lhs - piv.radicand(c.x, c.sigma, c.sigma_prime)));
  }
  o.require(res <= 1e-6, "sigma-PIV residual " + sci(res));
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, tracy_widom}, {2, gue_piv},       {3, lue_pv},         {4, jue_pvi},       {5, jue_hard},
      {6, lue_hard},    {7, lue_soft},      {8, jue_mc},         {9, instability},   {10, perturbations},
      {11, oracles}};
  int failures = 0;
  for (const auto& [k, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s %s (%.1f s)\n", k, o.pass ? "PASS" : "FAIL", o.detail.str().c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
