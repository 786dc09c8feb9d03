#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "gr2/rng.hpp"

namespace gr2 {

// Tolerances used across the library.
inline constexpr double kSymmetryTol = 1e-12;      // relative, symmetry check
inline constexpr double kPhysicalTol = 1e-9;       // nu_min >= 1 - tol
inline constexpr double kSpectrumPairTol = 1e-8;   // +/- eigenvalue pairing
inline constexpr double kPurityTol = 1e-8;         // pure iff |det - 1| <= tol

/// Covariance matrix of an n-mode Gaussian state.
///
/// Entries are second moments of the quadratures in the interleaved ordering
/// (q1, p1, q2, p2, ...), normalized so the vacuum covariance matrix is the
/// identity. Symmetry and positive definiteness are enforced on
/// construction; physicality (nu_min >= 1) is a separate property reported
/// by validate() and required by the entropy functions.
class CovarianceMatrix {
 public:
  /// Throws std::invalid_argument if `entries` is not square with even
  /// dimension >= 2, not symmetric within kSymmetryTol (relative), or not
  /// positive definite.
  explicit CovarianceMatrix(Eigen::MatrixXd entries);

  int modes() const { return n_modes_; }
  int dim() const { return 2 * n_modes_; }
  const Eigen::MatrixXd& matrix() const { return m_; }

 private:
  Eigen::MatrixXd m_;
  int n_modes_ = 0;
};

struct ValidityReport {
  bool symmetric = false;
  bool positive_definite = false;
  bool physical = false;
  double nu_min = 0.0;
};

/// Ordered disjoint groups of mode indices naming subsystems.
struct ModePartition {
  std::vector<std::vector<int>> groups;
};

/// Two-mode covariance matrix reduced to its local-unitary standard form
/// diag blocks a*I2, b*I2 and off-diagonal block diag(c_plus, c_minus).
struct TwoModeStandardForm {
  double a = 1.0;
  double b = 1.0;
  double c_plus = 0.0;
  double c_minus = 0.0;

  /// Slack of the uncertainty relation; >= 0 for physical states.
  double uncertainty_margin() const;
};

/// The four local symplectic invariants of a two-mode state:
/// determinants of the A block, B block, off-diagonal block, and the
/// full matrix.
struct LocalInvariants {
  double i1 = 0.0;
  double i2 = 0.0;
  double i3 = 0.0;
  double i4 = 0.0;
};

/// Williamson normal form gamma = S * diag(nu_1 I2, ..., nu_n I2) * S^T
/// with S symplectic and descending nu.
struct WilliamsonForm {
  Eigen::MatrixXd symplectic;
  std::vector<double> spectrum;
};

/// Block-diagonal symplectic form for n modes in interleaved ordering.
Eigen::MatrixXd symplectic_form(int n_modes);

/// Symplectic spectrum (moduli of the eigenvalues of i*Omega*gamma,
/// deduplicated into n pairs), descending. Throws std::runtime_error if
/// the +/- pairing fails beyond kSpectrumPairTol.
std::vector<double> symplectic_spectrum(const CovarianceMatrix& cm);

/// Checks a raw matrix for the covariance-matrix requirements. Throws
/// std::invalid_argument if not square with even dimension.
ValidityReport validate(const Eigen::MatrixXd& entries);
ValidityReport validate(const CovarianceMatrix& cm);

bool is_pure(const CovarianceMatrix& cm, double tol = kPurityTol);

/// tr rho^2 = det(gamma)^{-1/2}. Throws std::domain_error when
/// det(gamma) < 1 - kPhysicalTol.
double purity(const CovarianceMatrix& cm);

/// Renyi-2 entropy, 0.5 * ln det gamma (nats).
double renyi2_entropy(const CovarianceMatrix& cm);

/// Renyi entropy of order alpha > 0, alpha != 1, from the symplectic
/// spectrum.
double renyi_alpha_entropy(const CovarianceMatrix& cm, double alpha);

/// von Neumann entropy from the symplectic spectrum.
double von_neumann_entropy(const CovarianceMatrix& cm);

/// Principal submatrix on the quadratures of the selected modes.
CovarianceMatrix reduce(const CovarianceMatrix& cm,
                        const std::vector<int>& modes);

/// Local symplectic invariants of a two-mode state, each computed as a
/// literal determinant.
LocalInvariants local_invariants(const CovarianceMatrix& cm);

/// Standard-form parameters recovered from the local invariants, with
/// c_plus >= |c_minus| and sign(c_plus * c_minus) = sign(I3).
TwoModeStandardForm to_standard_form(const CovarianceMatrix& cm);

/// Builds the 4x4 covariance matrix of a standard-form tuple.
CovarianceMatrix standard_form_cm(const TwoModeStandardForm& sf);

/// Two-mode squeezed state: a = cosh 2r, c_plus = -c_minus = sinh 2r.
CovarianceMatrix tmss_cm(double r);

/// Haar-random n x n unitary (QR of a complex Ginibre matrix with phase
/// fixing).
Eigen::MatrixXcd random_unitary(int n, Rng& rng);

/// Orthogonal symplectic matrix built from an n x n unitary, in the
/// interleaved quadrature ordering.
Eigen::MatrixXd orthogonal_symplectic_from_unitary(const Eigen::MatrixXcd& u);

/// Random symplectic S = K1 * Z * K2 with K_i Haar orthogonal-symplectic
/// and Z per-mode squeezers exp(+-r), r uniform in [0, squeeze_cap].
Eigen::MatrixXd random_symplectic(int n_modes, double squeeze_cap, Rng& rng);

/// Random pure-state covariance matrix S * S^T.
CovarianceMatrix random_pure_cm(int n_modes, double squeeze_cap, Rng& rng);

/// Random mixed-state covariance matrix S * D * S^T with thermal
/// D = diag(nu_k I2), nu_k uniform in [1, temp_cap].
CovarianceMatrix random_mixed_cm(int n_modes, double squeeze_cap,
                                 double temp_cap, Rng& rng);

/// Williamson decomposition of a valid covariance matrix.
WilliamsonForm williamson(const CovarianceMatrix& cm);

namespace detail {

/// log det of a symmetric positive definite matrix via Cholesky.
double log_det_spd(const Eigen::MatrixXd& m);

/// Two-mode symplectic from the Euler chart O(u) * Z(r): u = (alpha, psi,
/// chi, theta) parameterizes a U(2) element mapped to its orthogonal
/// symplectic, and Z = diag(e^{r1}, e^{-r1}, e^{r2}, e^{-r2}). Every pure
/// two-mode covariance matrix is G * G^T for some chart point.
Eigen::MatrixXd euler_symplectic_two_mode(const std::array<double, 6>& p);

/// Quadrature row/column indices for a list of modes.
std::vector<int> quadrature_indices(const std::vector<int>& modes);

/// Checks that partition groups are disjoint and in range; optionally that
/// they cover all modes. Throws std::invalid_argument otherwise.
void check_partition(const CovarianceMatrix& cm, const ModePartition& p,
                     bool require_cover);

}  // namespace detail

}  // namespace gr2
