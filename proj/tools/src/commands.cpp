#include "rmt_cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <utility>

#include "rmt/anchored.hpp"
#include "rmt/edges.hpp"
#include "rmt/errors.hpp"
#include "rmt/fredholm.hpp"
#include "rmt/montecarlo.hpp"
#include "rmt/parallel.hpp"
#include "rmt/sigmaode.hpp"
#include "rmt_cli/output.hpp"

namespace rmt::cli {
namespace {

// Published reference values used by --check.
const std::map<int, double> kGuePiv = {{5, 1.01e-3}, {10, 6.83e-4}, {20, 8.84e-4}, {100, 1.43e-3}, {500, 1.89e-3}};

struct LueRow {
  double alpha, err;
  int nodes, anchors;
  double s_min, s_max;
};
const std::map<int, LueRow> kLuePv = {{100, {5.0, 1.54e-4, 280, 101, 382.089, 437.789}},
                                      {50, {2.0, 1.99e-4, 260, 91, 181.876, 226.085}},
                                      {20, {0.0, 2.87e-4, 240, 81, 63.713, 96.287}},
                                      {10, {0.0, 5.95e-4, 220, 61, 27.073, 52.927}}};

const std::map<int, double> kJueHard00 = {{20, 6.77e-4}, {40, 1.69e-4}, {80, 4.23e-5}, {120, 1.88e-5}, {300, 4.25e-6}};

struct HardKey {
  double a, b;
  Edge edge;
  bool operator<(const HardKey& o) const {
    return std::tie(a, b, edge) < std::tie(o.a, o.b, o.edge);
  }
};
const std::map<HardKey, double> kJueHard300 = {
    {{2, 0, Edge::right}, 4.03e-3}, {{2, 0, Edge::left}, 2.45e-3}, {{0, 3, Edge::right}, 3.66e-3},
    {{0, 3, Edge::left}, 2.88e-3},  {{2, 3, Edge::right}, 1.01e-2}, {{2, 3, Edge::left}, 4.82e-3}};

const std::map<int, double> kLueHardBound = {{20, 5e-4}, {40, 5e-5}, {80, 5e-5}};

struct McRow {
  double mean, sd, sd_scaled, kolmogorov;
};
const std::map<std::pair<int, int>, McRow> kJueMc = {
    {{100, 2000}, {0.94534, 0.00346, 0.07451, 0.017}}, {{200, 2000}, {0.94793, 0.00211, 0.07231, 0.014}},
    {{400, 2000}, {0.94941, 0.00125, 0.06798, 0.016}}, {{100, 5000}, {0.94537, 0.00348, 0.07489, 0.018}},
    {{200, 5000}, {0.94782, 0.00214, 0.07316, 0.008}}, {{400, 5000}, {0.94939, 0.00128, 0.06943, 0.012}}};

CheckOutcome band_check(const std::string& what, double value, double reference) {
  const double ratio = value / reference;
  std::ostringstream os;
  os << what << " = " << sci(value) << ", reference " << sci(reference) << ", ratio " << fixed(ratio, 3)
     << " (band [0.5, 2])";
  return {ratio >= 0.5 && ratio <= 2.0, os.str()};
}

CheckOutcome bound_check(const std::string& what, double value, double bound, bool upper = true) {
  std::ostringstream os;
  os << what << " = " << sci(value) << (upper ? " <= " : " >= ") << sci(bound);
  return {upper ? value <= bound : value >= bound, os.str()};
}

[[noreturn]] void no_reference(const std::string& what) {
  throw ParameterError("--check has no reference value for " + what);
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> v(count);
  for (int i = 0; i < count; ++i) v[i] = lo + (hi - lo) * i / (count - 1.0);
  v.back() = hi;
  return v;
}

std::vector<double> reversed(const std::vector<double>& v) { return {v.rbegin(), v.rend()}; }

std::vector<double> abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = std::fabs(a[i] - b[i]);
  return d;
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, x);
  return m;
}

int gue_default_anchors(const Window& w) { return static_cast<int>(std::lround(80.0 * (w.s_max - w.s_min) / 6.0)); }

Window gue_window(int n, double width) {
  if (width <= 0.0) return auto_window(EnsembleSpec::gue(n));
  const double c = std::sqrt(2.0 * n);
  return {c - 0.5 * width, c + 0.5 * width};
}

// Anchored run against the Fredholm CDF on the run grid, written as one CSV.
double write_anchored(const std::string& path, const AnchoredRun& run, const GapCurve& fred, const std::string& column) {
  const std::vector<double> s = reversed(run.grid);
  const std::vector<double> f = reversed(run.F_on_grid);
  write_csv(path, {"s", "F_fred", column, "abs_err"}, {s, fred.F, f, abs_diff(fred.F, f)});
  return max_abs_error(run, fred);
}

void add_tw_compare(CLI::App& app, CommandContext& ctx) {
  struct Opts {
    int nodes = 80;
    double xmin = -8.0, xmax = 4.0, step = 0.01, t0 = 8.0;
    std::string out = "tw.csv";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("tw-compare", "Tracy-Widom F2 from Painleve II versus the Airy Fredholm determinant");
  sub->add_option("--nodes", o->nodes, "Nystrom nodes for the Airy kernel")->capture_default_str();
  sub->add_option("--xmin", o->xmin, "left end of the x grid")->capture_default_str();
  sub->add_option("--xmax", o->xmax, "right end of the x grid")->capture_default_str();
  sub->add_option("--step", o->step, "grid step")->capture_default_str();
  sub->add_option("--t0", o->t0, "Airy matching point for Hastings-McLeod")->capture_default_str();
  sub->add_option("--out", o->out, "CSV output path")->capture_default_str();
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx](std::ostream& os) {
      if (!(o->step > 0.0 && o->xmax > o->xmin)) throw ParameterError("need xmax > xmin and step > 0");
      const int count = static_cast<int>(std::lround((o->xmax - o->xmin) / o->step)) + 1;
      const std::vector<double> x = linspace(o->xmin, o->xmax, count);
      const GapCurve fred = airy_gap_cdf(x, o->nodes);
      const IvpSolution q = hastings_mcleod(o->t0, o->xmin);
      const GapCurve pii = tw_cdf_from_q(q, x, o->t0);
      const std::vector<double> err = abs_diff(fred.F, pii.F);
      write_csv(o->out, {"x", "F_fred", "F_pii", "abs_err"}, {x, fred.F, pii.F, err});
      ctx.outputs.push_back(o->out);
      MarkdownTable t({"nodes", "x range", "max abs err"});
      t.add_row({std::to_string(o->nodes), "[" + fixed(o->xmin, 2) + ", " + fixed(o->xmax, 2) + "]", sci(max_of(err))});
      t.print(os);
      if (ctx.check) ctx.checks.push_back(bound_check("max |F_pii - F_fred|", max_of(err), 3e-4));
    };
  });
}

void add_gue_piv(CLI::App& app, CommandContext& ctx) {
  struct Opts {
    int n = 5, anchors = 0, grid = 600, nodes = 0;
    double width = 0.0, eps_init = 1e-9;
    std::string out = "gue_piv.csv";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("gue-piv", "Anchored sigma-PIV versus the finite-n GUE Fredholm CDF");
  sub->add_option("--n", o->n, "matrix size")->capture_default_str();
  sub->add_option("--width", o->width, "window width centred at sqrt(2n); 0 selects the default")->capture_default_str();
  sub->add_option("--anchors", o->anchors, "number of anchors; 0 selects about 80 per 6 units")->capture_default_str();
  sub->add_option("--grid", o->grid, "global grid size")->capture_default_str();
  sub->add_option("--nodes", o->nodes, "Nystrom nodes; 0 selects the default")->capture_default_str();
  sub->add_option("--eps-init", o->eps_init, "branch-sign threshold")->capture_default_str();
  sub->add_option("--out", o->out, "CSV output path")->capture_default_str();
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx](std::ostream& os) {
      const EnsembleSpec spec = EnsembleSpec::gue(o->n);
      spec.validate();
      const auto ref = kGuePiv.find(o->n);
      if (ctx.check && ref == kGuePiv.end()) no_reference("gue-piv n=" + std::to_string(o->n));
      const Window w = gue_window(o->n, o->width);
      AnchoredOptions opt;
      opt.n_anchors = o->anchors > 0 ? o->anchors : gue_default_anchors(w);
      opt.grid_size = o->grid;
      opt.eps_init = o->eps_init;
      opt.nystrom.nodes = o->nodes;
      const AnchoredRun run = anchored_cdf(spec, sigma_piv(o->n), w, opt);
      const GapCurve fred = fredholm_on_run_grid(spec, run, opt.nystrom);
      const double err = write_anchored(o->out, run, fred, "F_piv");
      ctx.outputs.push_back(o->out);
      MarkdownTable t({"n", "Max error", "Edge location", "Window width", "#anchors"});
      t.add_row({std::to_string(o->n), sci(err), fixed(std::sqrt(2.0 * o->n), 2), fixed(w.s_max - w.s_min, 1),
                 std::to_string(opt.n_anchors)});
      t.print(os);
      if (ctx.check) ctx.checks.push_back(band_check("max error", err, ref->second));
    };
  });
}

void add_gue_ivp_demo(CLI::App& app, CommandContext& ctx) {
  struct Opts {
    int n = 20, grid = 600;
    double s0 = std::nan("");
    std::string out = "gue_ivp_demo.csv";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("gue-ivp-demo", "Free sigma-PIV integration from one Fredholm anchor");
  sub->add_option("--n", o->n, "matrix size")->capture_default_str();
  sub->add_option("--s0", o->s0, "anchor location; defaults to sqrt(2n)");
  sub->add_option("--grid", o->grid, "grid size over the window")->capture_default_str();
  sub->add_option("--out", o->out, "CSV output path")->capture_default_str();
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx](std::ostream& os) {
      const EnsembleSpec spec = EnsembleSpec::gue(o->n);
      spec.validate();
      const double s0 = std::isnan(o->s0) ? std::sqrt(2.0 * o->n) : o->s0;
      const Window w = auto_window(spec);
      const DirectIvpReport rep = direct_ivp_demo(spec, sigma_piv(o->n), s0, w, {}, o->grid);
      const GapCurve fred = gap_cdf(spec, rep.curve.s_grid, {});
      write_csv(o->out, {"s", "F_fred", "F_ivp", "abs_err"},
                {rep.curve.s_grid, fred.F, rep.curve.F, abs_diff(fred.F, rep.curve.F)});
      ctx.outputs.push_back(o->out);
      MarkdownTable t({"n", "s0", "backward frontier", "forward frontier", "terminated early", "max error on span"});
      t.add_row({std::to_string(o->n), fixed(s0, 4), fixed(rep.backward_frontier, 4), fixed(rep.forward_frontier, 4),
                 (rep.forward_terminated || rep.backward_terminated) ? "yes" : "no", sci(rep.max_abs_error)});
      t.print(os);
      if (ctx.check) {
        const bool failed = rep.forward_terminated || rep.backward_terminated || rep.max_abs_error >= 0.1;
        ctx.checks.push_back({failed, std::string("early termination or max error >= 1e-1: ") +
                                          (failed ? "observed" : "not observed")});
      }
    };
  });
}

void add_gue_hamiltonian_demo(CLI::App& app, CommandContext& ctx) {
  struct Opts {
    int n = 20, samples = 400;
    double s0 = 6.4, target = 5.0;
    std::string out = "gue_hamiltonian.csv";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("gue-hamiltonian-demo", "Okamoto Hamiltonian IVP from Fredholm-matched data");
  sub->add_option("--n", o->n, "matrix size")->capture_default_str();
  sub->add_option("--s0", o->s0, "anchor location")->capture_default_str();
  sub->add_option("--target", o->target, "integration target")->capture_default_str();
  sub->add_option("--samples", o->samples, "dense-output samples written to the CSV")->capture_default_str();
  sub->add_option("--out", o->out, "CSV output path")->capture_default_str();
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx](std::ostream& os) {
      const EnsembleSpec spec = EnsembleSpec::gue(o->n);
      spec.validate();
      if (o->samples < 2) throw ParameterError("--samples must be at least 2");
      const AnchorDatum d = extract_anchor(spec, o->s0, 0.05, 9);
      const auto [q0, p0] = okamoto_initial_data(o->n, d);
      const IvpSolution sol = okamoto_hamiltonian_ivp(o->n, o->s0, q0, p0, o->target);
      const std::vector<double> s = linspace(o->s0, sol.s_reached(), o->samples);
      std::vector<double> q(s.size()), p(s.size()), h(s.size());
      double y[2];
      for (std::size_t i = 0; i < s.size(); ++i) {
        sol.sample(s[i], y);
        q[i] = y[0];
        p[i] = y[1];
        h[i] = okamoto_hamiltonian(o->n, s[i], y[0], y[1]);
      }
      write_csv(o->out, {"s", "q", "p", "H"}, {s, q, p, h});
      ctx.outputs.push_back(o->out);
      MarkdownTable t({"n", "s0", "target", "q0", "p0", "terminated early", "s reached", "steps"});
      t.add_row({std::to_string(o->n), fixed(o->s0, 3), fixed(o->target, 3), sci(q0, 6), sci(p0, 6),
                 sol.terminated_early() ? "yes" : "no", fixed(sol.s_reached(), 4), std::to_string(sol.steps())});
      t.print(os);
      if (ctx.check) {
        const bool ok = sol.terminated_early();
        ctx.checks.push_back({ok, "terminated early before the target: " + std::string(ok ? "yes" : "no") +
                                      " (s reached " + fixed(sol.s_reached(), 4) + ")"});
      }
    };
  });
}

void add_lue_pv(CLI::App& app, CommandContext& ctx) {
  struct Opts {
    int n = 20, anchors = 0, grid = 600, nodes = 0;
    double alpha = 0.0;
    std::string out = "lue_pv.csv";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("lue-pv", "Anchored sigma-PV versus the finite-N LUE Fredholm CDF");
  sub->add_option("--N", o->n, "matrix size")->capture_default_str();
  sub->add_option("--alpha", o->alpha, "Laguerre exponent")->capture_default_str();
  sub->add_option("--anchors", o->anchors, "number of anchors; 0 selects the tabulated or 81")->capture_default_str();
  sub->add_option("--nodes", o->nodes, "Gauss-Legendre nodes; 0 selects the tabulated or default")->capture_default_str();
  sub->add_option("--grid", o->grid, "global grid size")->capture_default_str();
  sub->add_option("--out", o->out, "CSV output path")->capture_default_str();
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx](std::ostream& os) {
      const EnsembleSpec spec = EnsembleSpec::lue(o->n, o->alpha);
      spec.validate();
      const auto it = kLuePv.find(o->n);
      const bool tabulated = it != kLuePv.end() && it->second.alpha == o->alpha;
      if (ctx.check && !tabulated) no_reference("lue-pv N=" + std::to_string(o->n));
      AnchoredOptions opt;
      opt.grid_size = o->grid;
      opt.nystrom.nodes = o->nodes > 0 ? o->nodes : (tabulated ? it->second.nodes : 0);
      opt.n_anchors = o->anchors > 0 ? o->anchors : (tabulated ? it->second.anchors : 81);
      const Window w = auto_window(spec, opt.nystrom);
      const AnchoredRun run = anchored_cdf(spec, sigma_pv(o->n, o->alpha), w, opt);
      const GapCurve fred = fredholm_on_run_grid(spec, run, opt.nystrom);
      const double err = write_anchored(o->out, run, fred, "F_pv");
      ctx.outputs.push_back(o->out);
      MarkdownTable t({"N", "alpha", "max|Delta|", "M (GL)", "#anchors", "s_min", "s_max"});
      t.add_row({std::to_string(o->n), fixed(o->alpha, 1), sci(err),
                 std::to_string(opt.nystrom.nodes ? opt.nystrom.nodes : default_nodes(spec)),
                 std::to_string(opt.n_anchors), fixed(w.s_min, 3), fixed(w.s_max, 3)});
      t.print(os);
      if (ctx.check) {
        ctx.checks.push_back(band_check("max error", err, it->second.err));
        const double dl = std::fabs(w.s_min / it->second.s_min - 1.0), dh = std::fabs(w.s_max / it->second.s_max - 1.0);
        ctx.checks.push_back({dl <= 5e-3 && dh <= 5e-3, "window relative deviation " + sci(std::max(dl, dh)) + " <= 5e-3"});
      }
    };
  });
}

void add_lue_hard(CLI::App& app, CommandContext& ctx) {
  struct Opts {
    int n = 20, points = 61, nodes = 80, limit_nodes = 120;
    double smin = 0.5, smax = 10.0;
    std::string out = "lue_hard.csv";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("lue-hard", "LUE lower gap on (0, s/(4N)) versus the order-0 Bessel gap");
  sub->add_option("--N", o->n, "matrix size")->capture_default_str();
  sub->add_option("--smin", o->smin, "left end of the s grid")->capture_default_str();
  sub->add_option("--smax", o->smax, "right end of the s grid")->capture_default_str();
  sub->add_option("--points", o->points, "grid points")->capture_default_str();
  sub->add_option("--nodes", o->nodes, "Gauss-Legendre nodes for the Laguerre kernel")->capture_default_str();
  sub->add_option("--limit-nodes", o->limit_nodes, "Gauss-Legendre nodes for the Bessel kernel")->capture_default_str();
  sub->add_option("--out", o->out, "CSV output path")->capture_default_str();
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx](std::ostream& os) {
      if (o->points < 2) throw ParameterError("--points must be at least 2");
      const auto bound = kLueHardBound.find(o->n);
      if (ctx.check && bound == kLueHardBound.end()) no_reference("lue-hard N=" + std::to_string(o->n));
      const EdgeComparison c = lue_hard_edge(o->n, linspace(o->smin, o->smax, o->points), o->nodes, o->limit_nodes);
      write_csv(o->out, {"s", "E_finite", "E_hard", "abs_err"}, {c.s_grid, c.finite_n, c.limit, abs_diff(c.finite_n, c.limit)});
      ctx.outputs.push_back(o->out);
      MarkdownTable t({"N", "s range", "max|Delta|"});
      t.add_row({std::to_string(o->n), "[" + fixed(o->smin, 2) + ", " + fixed(o->smax, 2) + "]", sci(c.max_abs_err())});
      t.print(os);
      if (ctx.check) ctx.checks.push_back(bound_check("max error", c.max_abs_err(), bound->second));
    };
  });
}

void add_lue_soft(CLI::App& app, CommandContext& ctx) {
  struct Opts {
    int n = 500, airy_nodes = 80;
    double alpha = 0.0, xstep = 0.02;
    std::vector<double> quantiles{0.25, 0.5, 0.75};
    std::string out = "lue_soft.csv";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("lue-soft", "LUE largest eigenvalue calibrated against Tracy-Widom F2");
  sub->add_option("--N", o->n, "matrix size")->capture_default_str();
  sub->add_option("--alpha", o->alpha, "Laguerre exponent")->capture_default_str();
  sub->add_option("--quantiles", o->quantiles, "three calibration quantiles")->expected(3)->capture_default_str();
  sub->add_option("--xstep", o->xstep, "x step for the comparison on [-6, 6]")->capture_default_str();
  sub->add_option("--airy-nodes", o->airy_nodes, "Nystrom nodes for F2")->capture_default_str();
  sub->add_option("--out", o->out, "CSV output path")->capture_default_str();
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx](std::ostream& os) {
      if (o->quantiles.size() != 3) throw ParameterError("--quantiles needs exactly three values");
      if (ctx.check && !(o->n == 500 && o->alpha == 0.0)) no_reference("lue-soft other than N=500, alpha=0");
      const std::array<double, 3> q{o->quantiles[0], o->quantiles[1], o->quantiles[2]};
      const Calibration cal = lue_soft_calibration(o->n, o->alpha, q, {}, o->airy_nodes, o->xstep);
      const int count = static_cast<int>(std::lround(12.0 / o->xstep)) + 1;
      const std::vector<double> x = linspace(-6.0, 6.0, count);
      std::vector<double> s(count);
      for (int i = 0; i < count; ++i) s[i] = cal.mu + cal.sigma * x[i];
      const GapCurve fn = gap_cdf(EnsembleSpec::lue(o->n, o->alpha), s, {});
      const GapCurve f2 = airy_gap_cdf(x, o->airy_nodes);
      write_csv(o->out, {"x", "F_N_scaled", "F2", "abs_err"}, {x, fn.F, f2.F, abs_diff(fn.F, f2.F)});
      ctx.outputs.push_back(o->out);
      MarkdownTable t({"N", "alpha", "mu_N", "sigma_N", "max error on [-6,6]"});
      t.add_row({std::to_string(o->n), fixed(o->alpha, 1), fixed(cal.mu, 3), fixed(cal.sigma, 3), sci(cal.max_err)});
      t.print(os);
      if (ctx.check) {
        const double dm = std::fabs(cal.mu / 1999.86 - 1.0), ds = std::fabs(cal.sigma / 19.85 - 1.0);
        ctx.checks.push_back({dm <= 5e-3, "mu relative deviation " + sci(dm) + " <= 5e-3"});
        ctx.checks.push_back({ds <= 2e-2, "sigma relative deviation " + sci(ds) + " <= 2e-2"});
        ctx.checks.push_back(bound_check("max error", cal.max_err, 3e-3));
      }
    };
  });
}

void add_jue_pvi(CLI::App& app, CommandContext& ctx) {
  struct Opts {
    int n = 20, anchors = 81, grid = 600;
    double a = 0.0, b = 0.0;
    std::string out = "jue_pvi.csv";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("jue-pvi", "Anchored sigma-PVI versus the finite-N JUE Fredholm CDF");
  sub->add_option("--N", o->n, "matrix size")->capture_default_str();
  sub->add_option("--a", o->a, "Jacobi exponent at +1")->capture_default_str();
  sub->add_option("--b", o->b, "Jacobi exponent at -1")->capture_default_str();
  sub->add_option("--anchors", o->anchors, "number of anchors, uniform in y")->capture_default_str();
  sub->add_option("--grid", o->grid, "global grid size")->capture_default_str();
  sub->add_option("--out", o->out, "CSV output path")->capture_default_str();
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx](std::ostream& os) {
      const EnsembleSpec spec = EnsembleSpec::jue(o->n, o->a, o->b);
      spec.validate();
      AnchoredOptions opt;
      opt.n_anchors = o->anchors;
      opt.grid_size = o->grid;
      const Window w = auto_window(spec);
      const AnchoredRun run = anchored_cdf(spec, sigma_pvi(o->n, o->a, o->b), w, opt);
      const GapCurve fred = fredholm_on_run_grid(spec, run, {});
      const double err = write_anchored(o->out, run, fred, "F_pvi");
      ctx.outputs.push_back(o->out);
      MarkdownTable t({"N", "(a,b)", "max|Delta|", "#anchors", "s_min", "s_max"});
      t.add_row({std::to_string(o->n), "(" + fixed(o->a, 1) + "," + fixed(o->b, 1) + ")", sci(err),
                 std::to_string(opt.n_anchors), fixed(w.s_min, 8), format_double(w.s_max)});
      t.print(os);
      if (ctx.check) ctx.checks.push_back(bound_check("max error", err, 1e-2));
    };
  });
}

void add_jue_hard(CLI::App& app, CommandContext& ctx) {
  struct Opts {
    int n = 20, points = 61, nodes = 80, limit_nodes = 120;
    double a = 0.0, b = 0.0;
    std::string edge = "right";
    std::string out = "jue_hard.csv";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("jue-hard", "JUE hard edge versus the Bessel gap on s in [0, 15]");
  sub->add_option("--N", o->n, "matrix size")->capture_default_str();
  sub->add_option("--a", o->a, "Jacobi exponent at +1")->capture_default_str();
  sub->add_option("--b", o->b, "Jacobi exponent at -1")->capture_default_str();
  sub->add_option("--edge", o->edge, "right or left")->check(CLI::IsMember({"right", "left"}))->capture_default_str();
  sub->add_option("--points", o->points, "grid points on [0, 15]")->capture_default_str();
  sub->add_option("--nodes", o->nodes, "Gauss-Legendre nodes for the Jacobi kernel")->capture_default_str();
  sub->add_option("--limit-nodes", o->limit_nodes, "Gauss-Legendre nodes for the Bessel kernel")->capture_default_str();
  sub->add_option("--out", o->out, "CSV output path")->capture_default_str();
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx](std::ostream& os) {
      if (o->points < 2) throw ParameterError("--points must be at least 2");
      const Edge edge = o->edge == "left" ? Edge::left : Edge::right;
      std::optional<double> ref;
      if (o->a == 0.0 && o->b == 0.0) {
        if (const auto it = kJueHard00.find(o->n); it != kJueHard00.end()) ref = it->second;
      } else if (o->n == 300) {
        if (const auto it = kJueHard300.find({o->a, o->b, edge}); it != kJueHard300.end()) ref = it->second;
      }
      if (ctx.check && !ref) no_reference("jue-hard with these parameters");
      const EdgeComparison c = jue_hard_edge(o->n, o->a, o->b, edge, linspace(0.0, 15.0, o->points), o->nodes, o->limit_nodes);
      write_csv(o->out, {"s", "E_finite", "E_hard", "abs_err"}, {c.s_grid, c.finite_n, c.limit, abs_diff(c.finite_n, c.limit)});
      ctx.outputs.push_back(o->out);
      MarkdownTable t({"N", "(a,b)", "edge", "max|Delta|", "Bessel order"});
      t.add_row({std::to_string(o->n), "(" + fixed(o->a, 1) + "," + fixed(o->b, 1) + ")", o->edge, sci(c.max_abs_err()),
                 fixed(c.bessel_order, 1)});
      t.print(os);
      if (ctx.check) ctx.checks.push_back(band_check("max error", c.max_abs_err(), *ref));
    };
  });
}

void add_jue_mc(CLI::App& app, CommandContext& ctx) {
  struct Opts {
    int n = 100, n1 = 0, n2 = 0, m = 2000;
    std::uint64_t seed = 20240601;
    std::string out = "jue_mc.csv";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("jue-mc", "Double-Wishart Monte Carlo of the JUE soft edge against standardised F2");
  sub->add_option("--N", o->n, "matrix size")->capture_default_str();
  sub->add_option("--n1", o->n1, "degrees of freedom of A; 0 selects 2N")->capture_default_str();
  sub->add_option("--n2", o->n2, "degrees of freedom of B; 0 selects 3N")->capture_default_str();
  sub->add_option("--M", o->m, "number of samples")->capture_default_str();
  sub->add_option("--seed", o->seed, "64-bit seed")->capture_default_str();
  sub->add_option("--out", o->out, "CSV output path")->capture_default_str();
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx](std::ostream& os) {
      McConfig mc;
      mc.N = o->n;
      mc.n1 = o->n1 > 0 ? o->n1 : 2 * o->n;
      mc.n2 = o->n2 > 0 ? o->n2 : 3 * o->n;
      mc.M = o->m;
      mc.seed = o->seed;
      mc.validate();
      const auto row = kJueMc.find({mc.N, mc.M});
      if (ctx.check && (row == kJueMc.end() || mc.n1 != 2 * mc.N || mc.n2 != 3 * mc.N))
        no_reference("jue-mc with these parameters");
      int resampled = 0;
      const std::vector<double> samples = sample_theta_max(mc, &resampled);
      const TwStandardization tw = tw_standardization();
      const McSummary sm = mc_summary(samples, mc.N, tw);
      std::vector<double> z(samples.size());
      for (std::size_t i = 0; i < z.size(); ++i) z[i] = (samples[i] - sm.mean) / sm.sd;
      std::sort(z.begin(), z.end());
      const std::vector<double> grid = linspace(-4.0, 4.0, 801);
      std::vector<double> emp(grid.size()), ref(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        emp[i] = static_cast<double>(std::upper_bound(z.begin(), z.end(), grid[i]) - z.begin()) / z.size();
        ref[i] = tw.cdf(tw.mean + tw.sd * grid[i]);
      }
      write_csv(o->out, {"z", "F_emp", "F2_std", "abs_err"}, {grid, emp, ref, abs_diff(emp, ref)});
      ctx.outputs.push_back(o->out);
      MarkdownTable t({"N", "M", "mu_N", "sigma_N", "sigma_N N^{2/3}", "Delta_N", "resampled"});
      t.add_row({std::to_string(mc.N), std::to_string(mc.M), fixed(sm.mean, 5), fixed(sm.sd, 5), fixed(sm.sd_scaled, 5),
                 fixed(sm.kolmogorov, 3), std::to_string(resampled)});
      t.print(os);
      if (ctx.check) {
        const McRow& r = row->second;
        const double tol = 3.0 * r.sd / std::sqrt(static_cast<double>(mc.M));
        ctx.checks.push_back({std::fabs(sm.mean - r.mean) <= tol,
                              "|mean - " + fixed(r.mean, 5) + "| = " + sci(std::fabs(sm.mean - r.mean)) + " <= " + sci(tol)});
        const double dsd = std::fabs(sm.sd_scaled / r.sd_scaled - 1.0);
        ctx.checks.push_back({dsd <= 0.1, "sd N^{2/3} relative deviation " + sci(dsd) + " <= 1e-1"});
        ctx.checks.push_back(bound_check("Delta_N", sm.kolmogorov, 0.03));
      }
    };
  });
}

void add_piv_perturb(CLI::App& app, CommandContext& ctx) {
  struct Opts {
    int n = 20, anchors = 0, grid = 600;
    std::string out = "piv_perturb.csv";
  };
  auto o = std::make_shared<Opts>();
  auto* sub = app.add_subcommand("piv-perturb", "Anchored runs with perturbed sigma-PIV radicands");
  sub->add_option("--n", o->n, "matrix size")->capture_default_str();
  sub->add_option("--anchors", o->anchors, "number of anchors; 0 selects about 80 per 6 units")->capture_default_str();
  sub->add_option("--grid", o->grid, "global grid size")->capture_default_str();
  sub->add_option("--out", o->out, "CSV output path")->capture_default_str();
  sub->callback([o, &ctx] {
    ctx.action = [o, &ctx](std::ostream& os) {
      const EnsembleSpec spec = EnsembleSpec::gue(o->n);
      spec.validate();
      const Window w = auto_window(spec);
      AnchoredOptions opt;
      opt.n_anchors = o->anchors > 0 ? o->anchors : gue_default_anchors(w);
      opt.grid_size = o->grid;
      opt.truncate_on_failure = true;
      const AnchoredRun exact = anchored_cdf(spec, sigma_piv(o->n), w, opt);
      const GapCurve fred = fredholm_on_run_grid(spec, exact, {});
      const std::size_t ng = exact.grid.size();
      std::vector<std::vector<double>> cols{reversed(exact.grid), fred.F, reversed(exact.F_on_grid)};
      MarkdownTable t({"variant", "max vs exact form", "max vs Fredholm", "covered down to s"});
      const std::pair<const char*, PivVariant> variants[] = {
          {"shift_001", PivVariant::shift_001}, {"alt_A", PivVariant::alt_A}, {"alt_B", PivVariant::alt_B}};
      for (const auto& [name, v] : variants) {
        const AnchoredRun run = anchored_cdf(spec, sigma_piv_perturbed(o->n, v), w, opt);
        std::vector<double> col(ng, std::nan(""));
        double vs_exact = 0.0, vs_fred = 0.0;
        for (std::size_t k = 0; k < run.grid.size(); ++k) {
          col[ng - 1 - k] = run.F_on_grid[k];
          vs_exact = std::max(vs_exact, std::fabs(run.F_on_grid[k] - exact.F_on_grid[k]));
          vs_fred = std::max(vs_fred, std::fabs(run.F_on_grid[k] - fred.F[ng - 1 - k]));
        }
        cols.push_back(std::move(col));
        t.add_row({name, sci(vs_exact), sci(vs_fred), fixed(run.grid.back(), 4)});
        if (ctx.check) {
          if (v == PivVariant::shift_001) ctx.checks.push_back(bound_check("shift_001 vs exact", vs_exact, 1e-3));
          else ctx.checks.push_back(bound_check(std::string(name) + " vs Fredholm", vs_fred, 5e-3, false));
        }
      }
      write_csv(o->out, {"s", "F_fred", "F_exact", "F_shift_001", "F_alt_A", "F_alt_B"}, cols);
      ctx.outputs.push_back(o->out);
      t.print(os);
    };
  });
}

}  // namespace

void register_commands(CLI::App& app, CommandContext& ctx) {
  add_tw_compare(app, ctx);
  add_gue_piv(app, ctx);
  add_gue_ivp_demo(app, ctx);
  add_gue_hamiltonian_demo(app, ctx);
  add_lue_pv(app, ctx);
  add_lue_hard(app, ctx);
  add_lue_soft(app, ctx);
  add_jue_pvi(app, ctx);
  add_jue_hard(app, ctx);
  add_jue_mc(app, ctx);
  add_piv_perturb(app, ctx);
}

}  // namespace rmt::cli
