#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "rmt/fredholm.hpp"

namespace rmt {

using Rhs = std::function<void(double s, const double* state, double* deriv)>;

struct IvpProblem {
  Rhs rhs;
  double s_start = 0.0;
  double s_end = 1.0;
  std::vector<double> state0;
  double rtol = 1e-10;
  double atol = 1e-12;
  std::size_t max_steps = 1000000;

  void validate() const;
};

class IvpSolution {
 public:
  // Dense output on the covered span; DomainError outside it.
  std::vector<double> sample(double s) const;
  void sample(double s, double* out) const;

  bool terminated_early() const { return terminated_early_; }
  double s_start() const { return s_start_; }
  double s_reached() const { return s_reached_; }
  std::size_t dimension() const { return dim_; }
  std::size_t steps() const { return step_start_.size(); }
  std::size_t rejected_steps() const { return rejected_; }
  // Accepted step endpoints and the stepper state there.
  const std::vector<double>& step_points() const { return points_; }
  const std::vector<double>& step_states() const { return states_; }
  bool covers(double s) const;

 private:
  friend IvpSolution integrate(const IvpProblem& problem);
  friend IvpSolution hastings_mcleod(double t0, double x_min, double rtol);
  void scale_states(double factor);

  std::size_t dim_ = 0;
  double s_start_ = 0.0;
  double s_reached_ = 0.0;
  bool terminated_early_ = false;
  std::size_t rejected_ = 0;
  std::vector<double> step_start_;
  std::vector<double> step_size_;
  std::vector<double> coeffs_;  // 8 * dim per step
  std::vector<double> points_;
  std::vector<double> states_;
};

// Dormand-Prince 8(5,3) with PI step control and 7th order dense output.
IvpSolution integrate(const IvpProblem& problem);

// Hastings-McLeod solution of q'' = x q + 2 q^3 from q(T0) = Ai(T0) down to x_min; state (q, q').
IvpSolution hastings_mcleod(double t0, double x_min, double rtol = 1e-12);

GapCurve tw_cdf_from_q(const IvpSolution& solution, const std::vector<double>& x_grid, double t0);

}  // namespace rmt
