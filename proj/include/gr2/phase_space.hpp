#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gr2/covariance.hpp"
#include "gr2/rng.hpp"

namespace gr2 {

using PhasePoint = Eigen::VectorXd;

struct EntropyEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long sample_count = 0;
};

/// Wigner distribution value at a phase-space point,
/// pi^{-n} det(gamma)^{-1/2} exp(-xi^T gamma^{-1} xi).
double wigner_eval(const CovarianceMatrix& cm, const PhasePoint& xi);

/// Shannon entropy of the Wigner distribution: S2(gamma) + n (1 + ln pi).
double sampling_entropy(const CovarianceMatrix& cm);

/// Kullback-Leibler divergence between the Wigner distributions of two
/// equal-size states:
/// 0.5 [ ln(det g2 / det g1) + tr(g1 g2^{-1}) ] - n.
double relative_sampling_entropy(const CovarianceMatrix& cm1,
                                 const CovarianceMatrix& cm2);

/// Mutual information computed as the divergence between the joint state
/// and the product of its marginals. Requires a bipartition covering all
/// modes.
double mutual_information_via_relent(const CovarianceMatrix& cm,
                                     const ModePartition& partition);

/// Draws from the distribution whose density is the Wigner function
/// (normal with covariance gamma / 2). Deterministic per rng state.
class PhaseSpaceSampler {
 public:
  explicit PhaseSpaceSampler(const CovarianceMatrix& cm);
  PhasePoint draw(Rng& rng) const;

 private:
  Eigen::MatrixXd scaled_chol_;
};

std::vector<PhasePoint> sample_phase_space(const CovarianceMatrix& cm,
                                           long count, Rng& rng);

/// Monte Carlo estimate of the Wigner sampling entropy: the sample mean of
/// -ln W over draws from W, with the standard error of the mean.
EntropyEstimate mc_entropy(const CovarianceMatrix& cm, long count, Rng& rng);

/// Monte Carlo estimate of the relative sampling entropy: the sample mean
/// of ln(W1/W2) over draws from W1.
EntropyEstimate mc_relative_entropy(const CovarianceMatrix& cm1,
                                    const CovarianceMatrix& cm2, long count,
                                    Rng& rng);

}  // namespace gr2
