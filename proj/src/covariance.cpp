#include "gr2/covariance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gr2 {

namespace {

double max_abs(const Eigen::MatrixXd& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Permutation taking an interleaved vector (q1,p1,...) to the blocked
// ordering (q1..qn, p1..pn).
Eigen::MatrixXd interleave_permutation(int n_modes) {
  const int d = 2 * n_modes;
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d, d);
  for (int k = 0; k < n_modes; ++k) {
    p(k, 2 * k) = 1.0;
    p(n_modes + k, 2 * k + 1) = 1.0;
  }
  return p;
}

// Symplectic spectrum of a symmetric positive definite matrix. The matrix
// i*Omega*gamma is similar to the Hermitian i*L^T*Omega*L (gamma = L L^T),
// whose eigenvalues come in exact +/- pairs.
std::vector<double> spectrum_spd(const Eigen::MatrixXd& gamma) {
  const int d = static_cast<int>(gamma.rows());
  const int n = d / 2;
  Eigen::LLT<Eigen::MatrixXd> llt(gamma);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error(
        "symplectic_spectrum: matrix is not positive definite");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  const Eigen::MatrixXd k = l.transpose() * symplectic_form(n) * l;
  const Eigen::MatrixXcd h =
      std::complex<double>(0.0, 1.0) * k.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("symplectic_spectrum: eigensolver failed");
  }
  const Eigen::VectorXd ev = solver.eigenvalues();  // ascending, -nu..+nu
  std::vector<double> nu(n);
  for (int j = 0; j < n; ++j) {
    const double pos = ev(d - 1 - j);
    const double neg = ev(j);
    if (std::abs(pos + neg) > kSpectrumPairTol * (1.0 + std::abs(pos))) {
      throw std::runtime_error(
          "symplectic_spectrum: eigenvalues fail to pair, numerical "
          "breakdown");
    }
    nu[j] = 0.5 * (pos - neg);
  }
  return nu;  // descending by construction
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd entries) {
  const auto rows = entries.rows();
  if (rows != entries.cols() || rows < 2 || rows % 2 != 0) {
    throw std::invalid_argument(
        "CovarianceMatrix: dimension must be 2n with n >= 1");
  }
  const double asym = max_abs(entries - entries.transpose());
  if (asym > kSymmetryTol * (1.0 + max_abs(entries))) {
    throw std::invalid_argument("CovarianceMatrix: matrix is not symmetric");
  }
  Eigen::MatrixXd sym = 0.5 * (entries + entries.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(
        "CovarianceMatrix: matrix is not positive definite");
  }
  m_ = std::move(sym);
  n_modes_ = static_cast<int>(rows) / 2;
}

double TwoModeStandardForm::uncertainty_margin() const {
  const double a2 = a * a;
  const double b2 = b * b;
  const double cp2 = c_plus * c_plus;
  const double cm2 = c_minus * c_minus;
  return (a2 - 1.0) * (b2 - 1.0) - 2.0 * c_minus * c_plus - a * b * cp2 +
         cm2 * (cp2 - a * b);
}

Eigen::MatrixXd symplectic_form(int n_modes) {
  if (n_modes < 1) {
    throw std::invalid_argument("symplectic_form: n_modes must be >= 1");
  }
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

std::vector<double> symplectic_spectrum(const CovarianceMatrix& cm) {
  std::vector<double> nu = spectrum_spd(cm.matrix());
  if (cm.modes() == 2) {
    // Cross-check against the closed two-mode form.
    const LocalInvariants inv = local_invariants(cm);
    const double delta = inv.i1 + inv.i2 + 2.0 * inv.i3;
    const double disc = std::max(delta * delta - 4.0 * inv.i4, 0.0);
    const double hi = std::sqrt(0.5 * (delta + std::sqrt(disc)));
    const double lo = std::sqrt(std::max(0.5 * (delta - std::sqrt(disc)), 0.0));
    if (std::abs(nu[0] - hi) > 1e-7 * (1.0 + hi) ||
        std::abs(nu[1] - lo) > 1e-7 * (1.0 + lo)) {
      throw std::runtime_error(
          "symplectic_spectrum: two-mode cross-check failed");
    }
  }
  return nu;
}

ValidityReport validate(const Eigen::MatrixXd& entries) {
  if (entries.rows() != entries.cols() || entries.rows() < 2 ||
      entries.rows() % 2 != 0) {
    throw std::invalid_argument("validate: dimension must be 2n with n >= 1");
  }
  ValidityReport report;
  const double asym = max_abs(entries - entries.transpose());
  report.symmetric = asym <= kSymmetryTol * (1.0 + max_abs(entries));

  const Eigen::MatrixXd sym = 0.5 * (entries + entries.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  report.positive_definite = solver.eigenvalues().minCoeff() > 0.0;

  if (report.positive_definite) {
    const std::vector<double> nu = spectrum_spd(sym);
    report.nu_min = nu.back();
    report.physical = report.nu_min >= 1.0 - kPhysicalTol;
  } else {
    report.nu_min = std::numeric_limits<double>::quiet_NaN();
    report.physical = false;
  }
  return report;
}

ValidityReport validate(const CovarianceMatrix& cm) {
  return validate(cm.matrix());
}

bool is_pure(const CovarianceMatrix& cm, double tol) {
  return std::abs(std::exp(detail::log_det_spd(cm.matrix())) - 1.0) <= tol;
}

double purity(const CovarianceMatrix& cm) {
  const double log_det = detail::log_det_spd(cm.matrix());
  if (std::exp(log_det) < 1.0 - kPhysicalTol) {
    throw std::domain_error("purity: det(gamma) < 1, state is unphysical");
  }
  return std::exp(-0.5 * log_det);
}

double renyi2_entropy(const CovarianceMatrix& cm) {
  const double log_det = detail::log_det_spd(cm.matrix());
  if (std::exp(log_det) < 1.0 - kPhysicalTol) {
    throw std::domain_error(
        "renyi2_entropy: det(gamma) < 1, state is unphysical");
  }
  return 0.5 * log_det;
}

double renyi_alpha_entropy(const CovarianceMatrix& cm, double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0) {
    throw std::invalid_argument(
        "renyi_alpha_entropy: alpha must be positive and != 1");
  }
  double sum = 0.0;
  for (double nu : symplectic_spectrum(cm)) {
    // ln( 2^alpha / ((nu+1)^alpha - (nu-1)^alpha) ); clamp roundoff below 1.
    const double hi = std::pow(nu + 1.0, alpha);
    const double lo = std::pow(std::max(nu - 1.0, 0.0), alpha);
    sum += alpha * std::log(2.0) - std::log(hi - lo);
  }
  return sum / (1.0 - alpha);
}

double von_neumann_entropy(const CovarianceMatrix& cm) {
  double sum = 0.0;
  for (double nu : symplectic_spectrum(cm)) {
    const double up = 0.5 * (nu + 1.0);
    const double down = 0.5 * (nu - 1.0);
    sum += up * std::log(up);
    if (down > 0.0) {
      sum -= down * std::log(down);
    }
  }
  return sum;
}

CovarianceMatrix reduce(const CovarianceMatrix& cm,
                        const std::vector<int>& modes) {
  if (modes.empty()) {
    throw std::invalid_argument("reduce: empty mode group");
  }
  for (int m : modes) {
    if (m < 0 || m >= cm.modes()) {
      throw std::invalid_argument("reduce: mode index out of range");
    }
  }
  const std::vector<int> idx = detail::quadrature_indices(modes);
  const int d = static_cast<int>(idx.size());
  Eigen::MatrixXd sub(d, d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      sub(r, c) = cm.matrix()(idx[r], idx[c]);
    }
  }
  return CovarianceMatrix(std::move(sub));
}

LocalInvariants local_invariants(const CovarianceMatrix& cm) {
  if (cm.modes() != 2) {
    throw std::invalid_argument("local_invariants: state must have 2 modes");
  }
  const Eigen::MatrixXd& m = cm.matrix();
  LocalInvariants inv;
  inv.i1 = m.block<2, 2>(0, 0).determinant();
  inv.i2 = m.block<2, 2>(2, 2).determinant();
  inv.i3 = m.block<2, 2>(0, 2).determinant();
  inv.i4 = m.determinant();
  return inv;
}

TwoModeStandardForm to_standard_form(const CovarianceMatrix& cm) {
  const LocalInvariants inv = local_invariants(cm);
  const Eigen::MatrixXd& m = cm.matrix();

  // Reduce by explicit local symplectics: bring each marginal to its
  // Williamson form sqrt(det)*I with S = (det)^{1/4} L^{-1}, then
  // diagonalize the cross block with local rotations from its SVD. This
  // stays exact where the invariant-quadratic recovery loses half its
  // digits (double roots at c+ = |c-|).
  const auto marginal_reducer =
      [](const Eigen::Matrix2d& block) -> Eigen::Matrix2d {
    const Eigen::Matrix2d l = Eigen::LLT<Eigen::Matrix2d>(block).matrixL();
    return std::pow(block.determinant(), 0.25) *
           Eigen::Matrix2d(l.inverse());
  };
  const Eigen::Matrix2d sa = marginal_reducer(m.block<2, 2>(0, 0));
  const Eigen::Matrix2d sb = marginal_reducer(m.block<2, 2>(2, 2));
  const Eigen::Matrix2d cross = sa * m.block<2, 2>(0, 2) * sb.transpose();

  Eigen::JacobiSVD<Eigen::Matrix2d> svd(
      cross, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double orientation =
      svd.matrixU().determinant() * svd.matrixV().determinant();

  TwoModeStandardForm sf;
  sf.a = std::sqrt(inv.i1);
  sf.b = std::sqrt(inv.i2);
  sf.c_plus = svd.singularValues()(0);
  sf.c_minus = (orientation < 0.0 ? -1.0 : 1.0) * svd.singularValues()(1);
  return sf;
}

CovarianceMatrix standard_form_cm(const TwoModeStandardForm& sf) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
  m(0, 0) = m(1, 1) = sf.a;
  m(2, 2) = m(3, 3) = sf.b;
  m(0, 2) = m(2, 0) = sf.c_plus;
  m(1, 3) = m(3, 1) = sf.c_minus;
  return CovarianceMatrix(std::move(m));
}

CovarianceMatrix tmss_cm(double r) {
  if (!std::isfinite(r)) {
    throw std::invalid_argument("tmss_cm: squeezing must be finite");
  }
  TwoModeStandardForm sf;
  sf.a = sf.b = std::cosh(2.0 * r);
  sf.c_plus = std::sinh(2.0 * std::abs(r));
  sf.c_minus = -sf.c_plus;
  return standard_form_cm(sf);
}

Eigen::MatrixXcd random_unitary(int n, Rng& rng) {
  Eigen::MatrixXcd g(n, n);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) {
      g(r, c) = std::complex<double>(rng.normal(), rng.normal());
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phases so the distribution is Haar.
  for (int c = 0; c < n; ++c) {
    const std::complex<double> d = r(c, c);
    q.col(c) *= d / std::abs(d);
  }
  return q;
}

Eigen::MatrixXd orthogonal_symplectic_from_unitary(
    const Eigen::MatrixXcd& u) {
  const int n = static_cast<int>(u.rows());
  const Eigen::MatrixXd x = u.real();
  const Eigen::MatrixXd y = u.imag();
  Eigen::MatrixXd blocked(2 * n, 2 * n);
  blocked.topLeftCorner(n, n) = x;
  blocked.topRightCorner(n, n) = y;
  blocked.bottomLeftCorner(n, n) = -y;
  blocked.bottomRightCorner(n, n) = x;
  const Eigen::MatrixXd p = interleave_permutation(n);
  return p.transpose() * blocked * p;
}

Eigen::MatrixXd random_symplectic(int n_modes, double squeeze_cap, Rng& rng) {
  if (!(squeeze_cap >= 0.0) || !std::isfinite(squeeze_cap)) {
    throw std::invalid_argument("random_symplectic: bad squeeze cap");
  }
  const Eigen::MatrixXd k1 =
      orthogonal_symplectic_from_unitary(random_unitary(n_modes, rng));
  Eigen::VectorXd z(2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    const double r = rng.uniform(0.0, squeeze_cap);
    z(2 * k) = std::exp(r);
    z(2 * k + 1) = std::exp(-r);
  }
  const Eigen::MatrixXd k2 =
      orthogonal_symplectic_from_unitary(random_unitary(n_modes, rng));
  return k1 * z.asDiagonal() * k2;
}

CovarianceMatrix random_pure_cm(int n_modes, double squeeze_cap, Rng& rng) {
  const Eigen::MatrixXd s = random_symplectic(n_modes, squeeze_cap, rng);
  return CovarianceMatrix(s * s.transpose());
}

CovarianceMatrix random_mixed_cm(int n_modes, double squeeze_cap,
                                 double temp_cap, Rng& rng) {
  if (!(temp_cap >= 1.0)) {
    throw std::invalid_argument("random_mixed_cm: temp_cap must be >= 1");
  }
  const Eigen::MatrixXd s = random_symplectic(n_modes, squeeze_cap, rng);
  Eigen::VectorXd d(2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    const double nu = rng.uniform(1.0, temp_cap);
    d(2 * k) = nu;
    d(2 * k + 1) = nu;
  }
  return CovarianceMatrix(s * d.asDiagonal() * s.transpose());
}

WilliamsonForm williamson(const CovarianceMatrix& cm) {
  const int n = cm.modes();
  const int d = cm.dim();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> root_solver(cm.matrix());
  const Eigen::MatrixXd sqrt_cm =
      root_solver.eigenvectors() *
      root_solver.eigenvalues().cwiseSqrt().asDiagonal() *
      root_solver.eigenvectors().transpose();

  const Eigen::MatrixXd t = sqrt_cm * symplectic_form(n) * sqrt_cm;
  const Eigen::MatrixXcd h =
      std::complex<double>(0.0, 1.0) * t.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("williamson: eigensolver failed");
  }

  // Positive eigenvalues descending; real/imag parts of the eigenvectors
  // assemble an orthogonal basis bringing t to its canonical blocks.
  Eigen::MatrixXd q(d, d);
  Eigen::VectorXd inv_sqrt_nu(d);
  WilliamsonForm result;
  result.spectrum.resize(n);
  for (int k = 0; k < n; ++k) {
    const int pos_index = d - 1 - k;
    const double nu = solver.eigenvalues()(pos_index);
    const Eigen::VectorXcd v = solver.eigenvectors().col(pos_index);
    q.col(2 * k) = std::sqrt(2.0) * v.imag();
    q.col(2 * k + 1) = std::sqrt(2.0) * v.real();
    inv_sqrt_nu(2 * k) = 1.0 / std::sqrt(nu);
    inv_sqrt_nu(2 * k + 1) = inv_sqrt_nu(2 * k);
    result.spectrum[k] = nu;
  }
  result.symplectic = sqrt_cm * q * inv_sqrt_nu.asDiagonal();
  return result;
}

namespace detail {

Eigen::MatrixXd euler_symplectic_two_mode(const std::array<double, 6>& p) {
  const double alpha = p[0];
  const double psi = p[1];
  const double chi = p[2];
  const double theta = p[3];
  const std::complex<double> phase(std::cos(alpha), std::sin(alpha));
  Eigen::MatrixXcd u(2, 2);
  u(0, 0) = std::polar(std::cos(theta), psi);
  u(0, 1) = std::polar(std::sin(theta), chi);
  u(1, 0) = -std::polar(std::sin(theta), -chi);
  u(1, 1) = std::polar(std::cos(theta), -psi);
  u *= phase;

  Eigen::VectorXd z(4);
  z(0) = std::exp(p[4]);
  z(1) = std::exp(-p[4]);
  z(2) = std::exp(p[5]);
  z(3) = std::exp(-p[5]);
  return orthogonal_symplectic_from_unitary(u) * z.asDiagonal();
}

double log_det_spd(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("log_det_spd: matrix is not positive definite");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  double sum = 0.0;
  for (int i = 0; i < l.rows(); ++i) {
    sum += std::log(l(i, i));
  }
  return 2.0 * sum;
}

std::vector<int> quadrature_indices(const std::vector<int>& modes) {
  std::vector<int> idx;
  idx.reserve(2 * modes.size());
  for (int m : modes) {
    idx.push_back(2 * m);
    idx.push_back(2 * m + 1);
  }
  return idx;
}

void check_partition(const CovarianceMatrix& cm, const ModePartition& p,
                     bool require_cover) {
  std::vector<bool> seen(cm.modes(), false);
  int total = 0;
  for (const auto& group : p.groups) {
    for (int m : group) {
      if (m < 0 || m >= cm.modes()) {
        throw std::invalid_argument("partition: mode index out of range");
      }
      if (seen[m]) {
        throw std::invalid_argument("partition: repeated mode index");
      }
      seen[m] = true;
      ++total;
    }
  }
  if (require_cover && total != cm.modes()) {
    throw std::invalid_argument("partition: groups must cover all modes");
  }
}

}  // namespace detail

}  // namespace gr2
