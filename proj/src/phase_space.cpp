#include "gr2/phase_space.hpp"

#include <cmath>
#include <stdexcept>

namespace gr2 {

namespace {

// Per-state pieces of ln W: ln W(xi) = log_norm - xi^T inverse xi.
struct LogWigner {
  Eigen::MatrixXd inverse;
  double log_norm;

  explicit LogWigner(const CovarianceMatrix& cm)
      : inverse(cm.matrix().inverse()),
        log_norm(-cm.modes() * std::log(M_PI) -
                 0.5 * detail::log_det_spd(cm.matrix())) {}

  double operator()(const PhasePoint& xi) const {
    return log_norm - xi.dot(inverse * xi);
  }
};

EntropyEstimate reduce_mean(const std::vector<double>& values) {
  EntropyEstimate est;
  est.sample_count = static_cast<long>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / static_cast<double>(est.sample_count);
  double ss = 0.0;
  for (double v : values) ss += (v - est.mean) * (v - est.mean);
  const double var = ss / static_cast<double>(est.sample_count - 1);
  est.std_error = std::sqrt(var / static_cast<double>(est.sample_count));
  return est;
}

void check_mc_count(long count) {
  if (count < 1000) {
    throw std::invalid_argument(
        "monte carlo estimate needs at least 1000 samples");
  }
}

}  // namespace

double wigner_eval(const CovarianceMatrix& cm, const PhasePoint& xi) {
  if (xi.size() != cm.dim()) {
    throw std::invalid_argument("wigner_eval: phase point has wrong length");
  }
  return std::exp(LogWigner(cm)(xi));
}

double sampling_entropy(const CovarianceMatrix& cm) {
  return renyi2_entropy(cm) + cm.modes() * (1.0 + std::log(M_PI));
}

double relative_sampling_entropy(const CovarianceMatrix& cm1,
                                 const CovarianceMatrix& cm2) {
  if (cm1.modes() != cm2.modes()) {
    throw std::invalid_argument(
        "relative_sampling_entropy: mode counts differ");
  }
  const double log_ratio = detail::log_det_spd(cm2.matrix()) -
                           detail::log_det_spd(cm1.matrix());
  const double cross = (cm1.matrix() * cm2.matrix().inverse()).trace();
  return 0.5 * (log_ratio + cross) - cm1.modes();
}

double mutual_information_via_relent(const CovarianceMatrix& cm,
                                     const ModePartition& partition) {
  if (partition.groups.size() != 2) {
    throw std::invalid_argument(
        "mutual_information_via_relent: need exactly two groups");
  }
  detail::check_partition(cm, partition, /*require_cover=*/true);
  const CovarianceMatrix a = reduce(cm, partition.groups[0]);
  const CovarianceMatrix b = reduce(cm, partition.groups[1]);

  // Assemble the product state gamma_A (+) gamma_B on the original mode
  // layout so it aligns entrywise with cm.
  Eigen::MatrixXd prod = Eigen::MatrixXd::Zero(cm.dim(), cm.dim());
  const auto scatter = [&prod](const Eigen::MatrixXd& block,
                               const std::vector<int>& modes) {
    const std::vector<int> idx = detail::quadrature_indices(modes);
    for (std::size_t r = 0; r < idx.size(); ++r) {
      for (std::size_t c = 0; c < idx.size(); ++c) {
        prod(idx[r], idx[c]) = block(static_cast<int>(r),
                                     static_cast<int>(c));
      }
    }
  };
  scatter(a.matrix(), partition.groups[0]);
  scatter(b.matrix(), partition.groups[1]);
  return relative_sampling_entropy(cm, CovarianceMatrix(prod));
}

PhaseSpaceSampler::PhaseSpaceSampler(const CovarianceMatrix& cm) {
  Eigen::LLT<Eigen::MatrixXd> llt(cm.matrix());
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument("PhaseSpaceSampler: invalid covariance");
  }
  // Covariance of the Wigner density is gamma / 2.
  scaled_chol_ = Eigen::MatrixXd(llt.matrixL()) / std::sqrt(2.0);
}

PhasePoint PhaseSpaceSampler::draw(Rng& rng) const {
  Eigen::VectorXd z(scaled_chol_.rows());
  for (int i = 0; i < z.size(); ++i) {
    z(i) = rng.normal();
  }
  return scaled_chol_ * z;
}

std::vector<PhasePoint> sample_phase_space(const CovarianceMatrix& cm,
                                           long count, Rng& rng) {
  if (count < 1) {
    throw std::invalid_argument("sample_phase_space: count must be >= 1");
  }
  const PhaseSpaceSampler sampler(cm);
  std::vector<PhasePoint> points;
  points.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    points.push_back(sampler.draw(rng));
  }
  return points;
}

EntropyEstimate mc_entropy(const CovarianceMatrix& cm, long count, Rng& rng) {
  check_mc_count(count);
  const PhaseSpaceSampler sampler(cm);
  const LogWigner log_w(cm);
  std::vector<double> values(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    values[static_cast<std::size_t>(i)] = -log_w(sampler.draw(rng));
  }
  return reduce_mean(values);
}

EntropyEstimate mc_relative_entropy(const CovarianceMatrix& cm1,
                                    const CovarianceMatrix& cm2, long count,
                                    Rng& rng) {
  check_mc_count(count);
  if (cm1.modes() != cm2.modes()) {
    throw std::invalid_argument("mc_relative_entropy: mode counts differ");
  }
  const PhaseSpaceSampler sampler(cm1);
  const LogWigner log_w1(cm1);
  const LogWigner log_w2(cm2);
  std::vector<double> values(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    const PhasePoint xi = sampler.draw(rng);
    values[static_cast<std::size_t>(i)] = log_w1(xi) - log_w2(xi);
  }
  return reduce_mean(values);
}

}  // namespace gr2
