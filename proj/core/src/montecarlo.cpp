#include "rmt/montecarlo.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "rmt/errors.hpp"
#include "rmt/parallel.hpp"

namespace rmt {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Box-Muller with a fixed two-uniform budget per pair.
class NormalPairs {
 public:
  explicit NormalPairs(std::uint64_t seed) : eng_(seed) {}

  std::complex<double> complex_normal() {
    const double u1 = uniform_open(), u2 = uniform_open();
    const double r = std::sqrt(-std::log(u1));  // variance 1/2 per component
    const double th = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(th), r * std::sin(th)};
  }

 private:
  double uniform_open() { return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53; }

  std::mt19937_64 eng_;
};

double theta_max_once(const McConfig& c, std::uint64_t seed) {
  using Mat = Eigen::MatrixXcd;
  NormalPairs rng(seed);
  const int n = c.N, m = c.n1 + c.n2;
  Mat h(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) h(i, j) = rng.complex_normal();
  Mat b = Mat::Zero(n, n);
  b.selfadjointView<Eigen::Lower>().rankUpdate(h.rightCols(c.n2));
  Mat a = Mat::Zero(n, n);
  a.selfadjointView<Eigen::Lower>().rankUpdate(h.leftCols(c.n1));
  a += b;
  Eigen::LLT<Mat, Eigen::Lower> llt(a.selfadjointView<Eigen::Lower>());
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::quiet_NaN();
  // W = L^{-1} B L^{-*} shares its spectrum with (A + B)^{-1} B.
  Mat w = b.selfadjointView<Eigen::Lower>();
  llt.matrixL().solveInPlace(w);
  w.adjointInPlace();
  llt.matrixL().solveInPlace(w);
  Eigen::SelfAdjointEigenSolver<Mat> es(w, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return std::numeric_limits<double>::quiet_NaN();
  return es.eigenvalues().maxCoeff();
}

}  // namespace

std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

void McConfig::validate() const {
  if (N < 1) throw ParameterError("McConfig: N must be positive");
  if (n1 < N || n2 < N) throw ParameterError("McConfig: need n1 >= N and n2 >= N");
  if (M < 100) throw ParameterError("McConfig: need at least 100 samples");
}

std::vector<double> sample_theta_max(const McConfig& config, int* resampled) {
  config.validate();
  std::vector<double> out(config.M);
  std::atomic<int> retries{0};
  parallel_for(config.M, [&](std::size_t m) {
    for (std::uint64_t attempt = 0;; ++attempt) {
      const std::uint64_t seed = substream_seed(config.seed ^ (attempt * 0x9e3779b97f4a7c15ULL), m);
      const double v = theta_max_once(config, seed);
      if (std::isfinite(v) && v > 0.0 && v < 1.0) {
        out[m] = v;
        return;
      }
      retries.fetch_add(1);
      if (attempt > 100) throw NumericalError("sample_theta_max: repeated factorization failure", config.N);
    }
  });
  if (resampled) *resampled = retries.load();
  return out;
}

McSummary mc_summary(const std::vector<double>& samples, int N, const TwStandardization& tw) {
  if (samples.size() < 100) throw InputError("mc_summary: need at least 100 samples");
  const double m = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= m;
  double var = 0.0;
  for (double v : samples) var += (v - mean) * (v - mean);
  var /= (m - 1.0);
  const double sd = std::sqrt(var);
  if (!(sd > 0.0)) throw InputError("mc_summary: degenerate sample with zero spread");
  std::vector<double> z(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) z[i] = (samples[i] - mean) / sd;
  std::sort(z.begin(), z.end());
  double worst = 0.0;
  const int count = 801;
  for (int i = 0; i < count; ++i) {
    const double x = -4.0 + 8.0 * i / (count - 1.0);
    const double emp = static_cast<double>(std::upper_bound(z.begin(), z.end(), x) - z.begin()) / m;
    worst = std::max(worst, std::fabs(emp - tw.cdf(tw.mean + tw.sd * x)));
  }
  McSummary s;
  s.mean = mean;
  s.sd = sd;
  s.sd_scaled = sd * std::pow(static_cast<double>(N), 2.0 / 3.0);
  s.kolmogorov = worst;
  s.samples_used = static_cast<int>(samples.size());
  return s;
}

}  // namespace rmt
