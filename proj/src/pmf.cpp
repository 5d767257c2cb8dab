#include "dmm/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dmm {

namespace {
constexpr double kProbSumTolerance = 1e-12;
}

DiscretePmf DiscretePmf::uniform(int lo, int hi) {
  DiscretePmf pmf;
  for (int v = lo; v <= hi; ++v) {
    pmf.support.push_back(v);
    pmf.probs.push_back(1.0 / (hi - lo + 1));
  }
  return pmf;
}

DiscretePmf DiscretePmf::point_mass(int value) {
  return DiscretePmf{{value}, {1.0}};
}

double DiscretePmf::mean() const {
  double m = 0;
  for (std::size_t i = 0; i < support.size(); ++i) m += support[i] * probs[i];
  return m;
}

double DiscretePmf::variance() const {
  const double m = mean();
  double v = 0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    v += probs[i] * (support[i] - m) * (support[i] - m);
  }
  return v;
}

int DiscretePmf::max_support() const {
  return support.empty() ? 0 : *std::max_element(support.begin(), support.end());
}

std::vector<std::string> DiscretePmf::validate() const {
  std::vector<std::string> issues;
  if (support.empty()) {
    issues.push_back("support: empty");
    return issues;
  }
  if (support.size() != probs.size()) {
    issues.push_back("probs: length " + std::to_string(probs.size()) +
                     " does not match support length " + std::to_string(support.size()));
    return issues;
  }
  for (std::size_t i = 0; i < support.size(); ++i) {
    if (support[i] < 0) {
      issues.push_back("support[" + std::to_string(i) + "]: negative value " +
                       std::to_string(support[i]));
    }
    if (i > 0 && support[i] <= support[i - 1]) {
      issues.push_back("support[" + std::to_string(i) + "]: values must be ascending and distinct");
    }
    if (probs[i] < 0 || probs[i] > 1) {
      issues.push_back("probs[" + std::to_string(i) + "]: " + std::to_string(probs[i]) +
                       " outside [0, 1]");
    }
  }
  const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(sum - 1.0) > kProbSumTolerance) {
    issues.push_back("probs: sum to " + std::to_string(sum) + ", must be 1 within 1e-12");
  }
  return issues;
}

void DiscretePmf::check() const {
  const auto issues = validate();
  if (issues.empty()) return;
  std::string msg = "invalid pmf:";
  for (const auto& issue : issues) msg += "\n  " + issue;
  throw std::invalid_argument(msg);
}

int DiscretePmf::sample(double u01) const {
  double cdf = 0;
  for (std::size_t i = 0; i + 1 < support.size(); ++i) {
    cdf += probs[i];
    if (u01 < cdf) return support[i];
  }
  return support.back();
}

MomentSummary moments(const DiscretePmf& n_pmf, const DiscretePmf& s_pmf) {
  n_pmf.check();
  s_pmf.check();
  MomentSummary m;
  m.mu_n = n_pmf.mean();
  m.sigma_n = std::sqrt(n_pmf.variance());
  m.mu_s = s_pmf.mean();
  m.sigma_s = std::sqrt(s_pmf.variance());
  m.sigma_combined = std::sqrt(n_pmf.variance() + s_pmf.variance());
  double nsm = 0;
  for (std::size_t i = 0; i < n_pmf.support.size(); ++i) {
    for (std::size_t j = 0; j < s_pmf.support.size(); ++j) {
      nsm += n_pmf.probs[i] * s_pmf.probs[j] *
             std::min(n_pmf.support[i], s_pmf.support[j]);
    }
  }
  m.n_sm = nsm;
  return m;
}

DiscretePmf scale_variance(const DiscretePmf& pmf, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("scale_variance: lambda " + std::to_string(lambda) +
                                " outside [0, 1]");
  }
  pmf.check();
  if (lambda == 1.0) return pmf;

  const double mu = pmf.mean();
  std::size_t anchor = 0;
  for (std::size_t i = 1; i < pmf.support.size(); ++i) {
    if (std::abs(pmf.support[i] - mu) < std::abs(pmf.support[anchor] - mu)) anchor = i;
  }

  DiscretePmf out;
  for (std::size_t i = 0; i < pmf.support.size(); ++i) {
    double p = lambda * pmf.probs[i];
    if (i == anchor) p += 1.0 - lambda;
    if (p > 0.0) {
      out.support.push_back(pmf.support[i]);
      out.probs.push_back(p);
    }
  }
  return out;
}

}  // namespace dmm
