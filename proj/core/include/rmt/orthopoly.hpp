#pragma once

#include <string>
#include <vector>

namespace rmt {

enum class EnsembleKind { gue, lue, jue };

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::gue;
  int n = 1;
  double alpha = 0.0;  // LUE weight x^alpha e^{-x}
  double a = 0.0;      // JUE weight (1-x)^a (1+x)^b
  double b = 0.0;

  static EnsembleSpec gue(int n);
  static EnsembleSpec lue(int n, double alpha);
  static EnsembleSpec jue(int n, double a, double b);

  void validate() const;
  std::string label() const;
};

// Orthonormal recurrence x p_k = a_{k+1} p_{k+1} + b_k p_k + a_k p_{k-1}, tabulated for k <= n.
class Recurrence {
 public:
  explicit Recurrence(const EnsembleSpec& spec);

  const EnsembleSpec& spec() const { return spec_; }
  double diag(int k) const { return b_[k]; }
  double offdiag(int k) const { return a_[k]; }
  double p0() const { return p0_; }
  bool in_support(double x) const;
  double log_weight(double x) const;

  // phi_0(x)..phi_n(x) written into out (size n+1).
  void phi(double x, double* out) const;

 private:
  EnsembleSpec spec_;
  std::vector<double> a_;
  std::vector<double> b_;
  double p0_ = 1.0;
};

std::vector<double> phi_values(const EnsembleSpec& spec, double x);

// Kernel from precomputed phi vectors (each of length n+1).
double cd_kernel_from_phi(double gamma, int n, double x, const double* phx, double y, const double* phy);

double cd_kernel(const EnsembleSpec& spec, double x, double y);

// gamma_n with K(x,y) = gamma_n (phi_{n-1}(x) phi_n(y) - phi_n(x) phi_{n-1}(y)) / (x - y).
double cd_prefactor(const EnsembleSpec& spec);

}  // namespace rmt
