#pragma once

#include <array>

#include "gr2/correlations.hpp"
#include "gr2/covariance.hpp"
#include "gr2/rng.hpp"

namespace gr2 {

/// Single-mode marginal invariants (a1, a2, a3) characterizing a pure
/// three-mode Gaussian state up to local unitaries.
struct ThreeModeLocalInvariants {
  double a1 = 1.0;
  double a2 = 1.0;
  double a3 = 1.0;

  double value(int index) const;
  /// Triangle condition |a_j - a_k| + 1 <= a_i <= a_j + a_k - 1 for all
  /// permutations.
  bool triangle_ok(double tol = 1e-12) const;
};

/// Branch classification of the reduced-pair entanglement formula.
/// pair_branch[k] refers to the pair excluding mode k: 1 = separable
/// reduction, 2 = generic entangled branch, 3 = low-purity branch.
struct InseparabilityClass {
  std::array<int, 3> pair_branch = {1, 1, 1};
  bool fully_inseparable = false;
};

/// Smaller symplectic eigenvalue of the partially transposed state.
/// Values below 1 certify entanglement; >= 1 means separable (exact for
/// two single modes).
double ppt_min_symplectic_eigenvalue(const CovarianceMatrix& cm);

/// One-parameter family whose minimum over theta gives the two-mode
/// entanglement: E2 = 0.5 ln(min_theta m_theta). Throws std::domain_error
/// when a radicand or denominator leaves the formula's domain.
double m_theta(const TwoModeStandardForm& sf, double theta);

/// Entanglement of a two-mode state: 0 if the PPT gate says separable,
/// the reduced entropy for pure states, otherwise the theta-minimization
/// of m_theta (falls back to the convex-roof search on domain failures,
/// flagged method = numeric).
MeasureReport e2_two_mode(const CovarianceMatrix& cm);

/// Direct minimization of 0.5 ln det sigma_A over pure two-mode covariance
/// matrices sigma <= gamma (derivative-free descent from `restarts` random
/// starts anchored at the Williamson floor, which is always feasible).
MeasureReport convex_roof_oracle(const CovarianceMatrix& cm, int restarts,
                                 Rng& rng);

/// Entanglement across a bipartition of a pure state: the Renyi-2 entropy
/// of either side. Throws std::invalid_argument if the state is not pure.
double e2_pure_bipartition(const CovarianceMatrix& cm,
                           const ModePartition& partition);

/// Standard-form pure three-mode covariance matrix with the given
/// single-mode invariants.
CovarianceMatrix three_mode_pure_cm(const ThreeModeLocalInvariants& inv);

/// Reduced-pair entanglement factor: E2 of the pair (i, j) is 0.5 ln of
/// the returned value.
double g_reduced(const ThreeModeLocalInvariants& inv, int i, int j);

InseparabilityClass classify_inseparability(
    const ThreeModeLocalInvariants& inv);

/// Residual tripartite entanglement with the given focus mode:
/// 0.5 ln(a_focus^2 / (g g')).
double residual_e2(const ThreeModeLocalInvariants& inv, int focus);

/// Permutation-invariant residual 0.5 ln(64 a1^2 a2^2 a3^2 / beta^2).
/// Throws std::domain_error outside the fully inseparable window.
double residual_e2_invariant(const ThreeModeLocalInvariants& inv);

/// E2(focus : rest) - sum_j E2(focus : j) for a pure state of 3 or 4
/// modes with a single-mode focus.
double monogamy_gap(const CovarianceMatrix& cm, int focus);

/// S2(rho_A) - J2(A|B) - E2(A:C) on a pure three-mode state; zero up to
/// numerics.
double kw_gap(const CovarianceMatrix& cm, int mode_a, int mode_b,
              int mode_c);

/// Scalar certificate K = J - F^2/G - 1 whose nonnegativity over physical
/// standard-form tuples bounds classical correlations below by
/// entanglement. Throws std::domain_error on degenerate tuples.
double k_function(double a, double b, double c_plus, double c_minus);

/// Same certificate with the c_plus^2 cross term in G instead of
/// c_plus * c_minus; kept for diagnostics (it goes negative, the primary
/// reading does not).
double k_function_variant(double a, double b, double c_plus, double c_minus);

/// J2(A|B) - E2(A:B) of a two-mode state; nonnegative.
double je_gap(const CovarianceMatrix& cm);

/// Residual tripartite discord S2(rho_focus) - D2(focus|j) - D2(focus|k)
/// on the pure three-mode state built from the invariants.
double residual_d2(const ThreeModeLocalInvariants& inv, int focus);

}  // namespace gr2
