#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

#include "gr2/covariance.hpp"

namespace gr2 {

enum class SolveMethod { closed_form, numeric };

/// Result of a correlation-measure computation, with the optimizer's
/// witness where one exists.
struct MeasureReport {
  double value = 0.0;
  SolveMethod method = SolveMethod::closed_form;
  bool converged = true;
  int iterations = 0;
  // Optimal measurement seed parameters (lambda, phi) or angle theta,
  // NaN when not applicable.
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double phi = std::numeric_limits<double>::quiet_NaN();
  double theta = std::numeric_limits<double>::quiet_NaN();
};

/// Which subsystem of a two-mode state the Gaussian measurement acts on.
/// measure_b yields the correlations of A given measurements on B.
enum class Direction { measure_b, measure_a };

/// Seed state of a Gaussian measurement, given by its covariance matrix.
struct MeasurementSeed {
  Eigen::MatrixXd gamma;

  /// Single-mode pure seed R(phi) diag(lambda, 1/lambda) R(phi)^T.
  /// Homodyne is the lambda -> 0 or infinity limit, heterodyne lambda = 1.
  static MeasurementSeed pure_single_mode(double lambda, double phi);
};

/// S2(A) + S2(B) - S2(AB) over a bipartition covering all modes.
double mutual_information(const CovarianceMatrix& cm,
                          const ModePartition& partition);

/// Strong-subadditivity gap
/// 0.5 ln( det g_AB det g_BC / (det g_ABC det g_B) ) over a tripartition.
/// Groups may be empty; an empty middle group reduces the gap to the plain
/// subadditivity (mutual-information) gap of the outer groups.
double ssa_gap(const CovarianceMatrix& cm, const ModePartition& partition);

/// Covariance matrix of the unmeasured modes after a Gaussian measurement
/// with the given seed on `measured_modes`: the Schur complement
/// g_A - s (g_B + seed)^{-1} s^T. The result is outcome-independent.
CovarianceMatrix conditional_cm(const CovarianceMatrix& cm,
                                const std::vector<int>& measured_modes,
                                const MeasurementSeed& seed);

/// One-way classical correlations of a two-mode state via the closed-form
/// minimal conditional determinant (branch formula on the standard form).
MeasureReport classical_correlations(const CovarianceMatrix& cm,
                                     Direction direction);

/// One-way classical correlations by direct numerical maximization over
/// pure Gaussian seeds, using the Schur complement for the conditional
/// state. The measured subsystem must have 1 or 2 modes.
MeasureReport classical_correlations_numeric(
    const CovarianceMatrix& cm, const std::vector<int>& measured_modes,
    int grid_density = 64, double refine_tol = 1e-10);

MeasureReport classical_correlations_numeric(const CovarianceMatrix& cm,
                                             Direction direction,
                                             int grid_density = 64,
                                             double refine_tol = 1e-10);

/// Discord of a two-mode state: mutual information minus classical
/// correlations (same minimizer, so J + D = I holds by construction).
MeasureReport discord(const CovarianceMatrix& cm, Direction direction);

struct SeedSearchResult {
  double lambda = 1.0;
  double phi = 0.0;
  double det_value = 0.0;
};

/// Independent oracle for the minimal conditional determinant: evaluates
/// the explicit det expression in (lambda, phi) on the standard form over
/// a grid with golden-section refinement.
SeedSearchResult seed_search(const CovarianceMatrix& cm, Direction direction,
                             int grid_density = 64,
                             double refine_tol = 1e-10);

namespace detail {

/// Closed-form minimum of the conditional determinant on the standard form.
double min_conditional_det_closed(const TwoModeStandardForm& sf);

/// Conditional determinant of a standard-form state under the pure
/// single-mode seed (lambda, phi), as an explicit scalar expression.
double conditional_det_standard_form(const TwoModeStandardForm& sf,
                                     double lambda, double phi);

}  // namespace detail

}  // namespace gr2
