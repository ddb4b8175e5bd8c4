#pragma once

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rmt/fredholm.hpp"
#include "rmt/orthopoly.hpp"
#include "rmt/sigmaode.hpp"

namespace rmt {

struct AnchorDatum {
  double s = 0.0;
  double F = 1.0;
  std::array<double, 5> c{};
  double sigma = 0.0;         // c1
  double sigma_prime = 0.0;   // 2 c2
  double sigma_second = 0.0;  // 6 c3
  double fit_rms = 0.0;
  bool ill_conditioned = false;
};

// Cauchy data of a sigma form in its own independent variable.
struct CauchyData {
  double x = 0.0;
  double sigma = 0.0;
  double sigma_prime = 0.0;
  double sigma_second = 0.0;
};

struct SigmaForm {
  std::string label;
  // sigma'' = sign * sqrt(radicand) / prefactor, all in the form variable x.
  std::function<double(double x, double sigma, double sigma_prime)> radicand;
  std::function<double(double x, double sigma, double sigma_prime)> prefactor;
  // Form variable x as a function of the spectral variable s, and back.
  std::function<double(double s)> x_of_s;
  std::function<double(double x)> s_of_x;
  // Converts derivatives g_k = d^k log F / ds^k at s into Cauchy data.
  std::function<CauchyData(double s, double g1, double g2, double g3)> from_log_cdf;
  // d log F / ds recovered from (x, sigma).
  std::function<double(double x, double sigma)> log_derivative;
  // Integrate in y = -log(1 - x) with state (sigma, (1 - x) sigma', x) instead of (sigma, sigma').
  bool stretched = false;
};

SigmaForm sigma_piv(int n);

enum class PivVariant { shift_001, alt_A, alt_B };
SigmaForm sigma_piv_perturbed(int n, PivVariant variant);

SigmaForm sigma_pv(int n, double alpha);

SigmaForm sigma_pvi(int n, double a, double b);

// The exact sigma form attached to an ensemble.
SigmaForm default_sigma_form(const EnsembleSpec& spec);

AnchorDatum extract_anchor(const EnsembleSpec& spec, double s, double stencil_halfwidth, int stencil_points,
                           const NystromConfig& config = {});

int branch_sign(double second_derivative, double eps_init);
int branch_sign(const AnchorDatum& datum, double eps_init);

struct Window {
  double s_min = 0.0;
  double s_max = 0.0;
};

Window auto_window(const EnsembleSpec& spec, const NystromConfig& config = {});

struct AnchoredOptions {
  int n_anchors = 81;
  int grid_size = 600;
  double eps_init = 1e-9;
  int stencil_points = 9;
  double stencil_halfwidth = 0.0;  // 0: min(0.15, spacing / 3)
  double rtol = 1e-10;
  double atol = 1e-12;
  // On a branch failure keep the completed intervals instead of throwing.
  bool truncate_on_failure = false;
  NystromConfig nystrom;
};

struct AnchoredRun {
  std::string form_label;
  std::vector<AnchorDatum> anchors;      // descending in s
  std::vector<double> grid;              // descending in s
  std::vector<double> sigma_on_grid;     // d log F / ds
  std::vector<double> F_on_grid;
  std::vector<double> logF_on_grid;
  std::vector<int> branch_signs;         // one per anchor interval
  std::vector<bool> freeze_fired;        // one per anchor interval
  std::vector<std::size_t> anchor_index; // grid index of each anchor
  std::vector<IvpSolution> segments;     // one per anchor interval, in the integration variable
  int failed_interval = -1;              // set when a truncated run stopped early
};

AnchoredRun anchored_cdf(const EnsembleSpec& spec, const SigmaForm& form, Window window, const AnchoredOptions& options);

// Anchor abscissae: uniform in s, or uniform in y for stretched forms; descending.
std::vector<double> anchor_points(const SigmaForm& form, Window window, int n_anchors);

// Fredholm CDF on the run grid and the maximal absolute deviation.
double max_abs_error(const AnchoredRun& run, const GapCurve& fredholm_on_grid);
GapCurve fredholm_on_run_grid(const EnsembleSpec& spec, const AnchoredRun& run, const NystromConfig& config);

struct DirectIvpReport {
  GapCurve curve;  // covered part of the window, increasing in s
  bool forward_terminated = false;
  bool backward_terminated = false;
  double forward_frontier = 0.0;
  double backward_frontier = 0.0;
  double max_abs_error = 0.0;  // against the supplied reference, NaN when none
};

// Free integration from one set of Cauchy data, forward and backward, without reprojection.
DirectIvpReport direct_ivp_from_data(const SigmaForm& form, const AnchorDatum& datum, Window window,
                                     int grid_size, const std::function<double(double)>& reference = {});

DirectIvpReport direct_ivp_demo(const EnsembleSpec& spec, const SigmaForm& form, double s0, Window window,
                                const NystromConfig& config = {}, int grid_size = 600);

// Okamoto Hamiltonian flow for GUE: alpha1 = 0, alpha2 = -n; state (q, p).
IvpSolution okamoto_hamiltonian_ivp(int n, double s0, double q0, double p0, double s_target, double rtol = 1e-10);

double okamoto_hamiltonian(int n, double s, double q, double p);

// (q0, p0) with H = sigma and H' = sigma' at the anchor; the root closest to sigma'' is chosen.
std::pair<double, double> okamoto_initial_data(int n, const AnchorDatum& datum);

}  // namespace rmt
