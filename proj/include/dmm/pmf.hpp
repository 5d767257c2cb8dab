#pragma once

#include <string>
#include <vector>

namespace dmm {

// Probability mass function on distinct non-negative integers, used for the
// per-step number of load arrivals and renewable units.
struct DiscretePmf {
  std::vector<int> support;   // ascending, distinct, >= 0
  std::vector<double> probs;  // same length, sums to 1 within 1e-12

  static DiscretePmf uniform(int lo, int hi);
  static DiscretePmf point_mass(int value);

  double mean() const;
  double variance() const;
  int max_support() const;  // the hard per-step bound implied by the pmf

  // Every problem with this pmf, phrased for humans; empty means valid.
  std::vector<std::string> validate() const;
  // Throws std::invalid_argument listing all problems.
  void check() const;

  // CDF inversion of a uniform [0,1) draw.
  int sample(double u01) const;

  bool operator==(const DiscretePmf&) const = default;
};

// Exact moments of the arrival/supply pair, computed by summation over the
// supports. n_sm = E[min(n_t, S_t)] under independence.
struct MomentSummary {
  double mu_n = 0;
  double sigma_n = 0;
  double mu_s = 0;
  double sigma_s = 0;
  double sigma_combined = 0;  // sqrt(sigma_n^2 + sigma_s^2)
  double n_sm = 0;
};

MomentSummary moments(const DiscretePmf& n_pmf, const DiscretePmf& s_pmf);

// Mean-preserving variance scaling: the mixture lambda*pmf + (1-lambda)*d_m,
// where d_m is a point mass at the support value nearest the mean (ties go
// to the smaller value). The result has
//   variance = lambda*sigma^2 + lambda*(1-lambda)*(mu - m)^2,
// and its mean shifts by (1-lambda)*(m - mu) -- zero whenever the mean sits
// on the support. lambda=1 returns the pmf unchanged; lambda=0 collapses to
// the point mass. Throws std::invalid_argument for lambda outside [0, 1].
DiscretePmf scale_variance(const DiscretePmf& pmf, double lambda);

}  // namespace dmm
