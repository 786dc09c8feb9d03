#include "gr2/correlations.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "gr2/optimize.hpp"

namespace gr2 {

namespace {

CovarianceMatrix swap_two_modes(const CovarianceMatrix& cm) {
  return reduce(cm, {1, 0});
}

double logdet_group(const CovarianceMatrix& cm,
                    const std::vector<int>& modes) {
  if (modes.empty()) {
    return 0.0;
  }
  return detail::log_det_spd(reduce(cm, modes).matrix());
}

std::vector<int> concat(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

std::vector<int> complement_modes(int n_modes, const std::vector<int>& sel) {
  std::vector<bool> used(n_modes, false);
  for (int m : sel) used[m] = true;
  std::vector<int> out;
  for (int m = 0; m < n_modes; ++m) {
    if (!used[m]) out.push_back(m);
  }
  return out;
}

// Measured-mode group for the two standard directions: measure_b acts on
// the last mode, measure_a on the first.
std::vector<int> measured_group(const CovarianceMatrix& cm, Direction dir) {
  return dir == Direction::measure_b ? std::vector<int>{cm.modes() - 1}
                                     : std::vector<int>{0};
}

struct Refined2D {
  double x0 = 0.0;
  double x1 = 0.0;
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Exhaustive grid scan followed by alternating golden-section refinement.
// Ties on the grid keep the lowest flat index. Refinement may leave the
// seeded grid (the optimum can sit past its edge, approaching the
// homodyne limit) up to the hard bounds; the search window grows while
// the minimizer keeps migrating outward and shrinks once it settles.
Refined2D grid_refine_2d(const std::function<double(double, double)>& f,
                         const std::vector<double>& axis0,
                         const std::vector<double>& axis1, double refine_tol,
                         double hard_lo0, double hard_hi0, double hard_lo1,
                         double hard_hi1, double value_tol = 1e-12) {
  Refined2D best;
  bool first = true;
  std::size_t bi = 0;
  std::size_t bj = 0;
  for (std::size_t i = 0; i < axis0.size(); ++i) {
    for (std::size_t j = 0; j < axis1.size(); ++j) {
      const double v = f(axis0[i], axis1[j]);
      if (first || v < best.value) {
        first = false;
        best.value = v;
        bi = i;
        bj = j;
      }
    }
  }
  best.x0 = axis0[bi];
  best.x1 = axis1[bj];

  double w0 = (axis0.back() - axis0.front()) /
              static_cast<double>(axis0.size() - 1);
  double w1 = (axis1.back() - axis1.front()) /
              static_cast<double>(axis1.size() - 1);

  for (int round = 0; round < 400; ++round) {
    ++best.iterations;
    const double previous = best.value;

    const auto f0 = [&](double x) { return f(x, best.x1); };
    const double lo0 = std::max(hard_lo0, best.x0 - w0);
    const double hi0 = std::min(hard_hi0, best.x0 + w0);
    const ScalarMinimum m0 = golden_section_min(f0, lo0, hi0, refine_tol);
    bool at_edge0 = false;
    if (m0.value < best.value) {
      best.value = m0.value;
      best.x0 = m0.x;
      at_edge0 = std::min(best.x0 - lo0, hi0 - best.x0) < 0.05 * w0;
    }

    const auto f1 = [&](double x) { return f(best.x0, x); };
    const double lo1 = std::max(hard_lo1, best.x1 - w1);
    const double hi1 = std::min(hard_hi1, best.x1 + w1);
    const ScalarMinimum m1 = golden_section_min(f1, lo1, hi1, refine_tol);
    bool at_edge1 = false;
    if (m1.value < best.value) {
      best.value = m1.value;
      best.x1 = m1.x;
      at_edge1 = std::min(best.x1 - lo1, hi1 - best.x1) < 0.05 * w1;
    }

    const bool tight = w0 <= refine_tol && w1 <= refine_tol;
    if (tight && previous - best.value < value_tol) {
      best.converged = true;
      break;
    }
    w0 = at_edge0 ? 3.0 * w0 : std::max(0.5 * w0, refine_tol);
    w1 = at_edge1 ? 3.0 * w1 : std::max(0.5 * w1, refine_tol);
  }
  return best;
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] =
        lo + (hi - lo) * static_cast<double>(i) /
                 static_cast<double>(count - 1);
  }
  return out;
}

// Numerical search over single-mode pure seeds through the Schur
// complement. Returns the report for J, in nats.
MeasureReport numeric_single_mode(const CovarianceMatrix& cm,
                                  const std::vector<int>& measured,
                                  int grid_density, double refine_tol) {
  const std::vector<int> kept = complement_modes(cm.modes(), measured);
  const double logdet_a = logdet_group(cm, kept);

  const auto objective = [&](double log_lambda, double phi) {
    const MeasurementSeed seed =
        MeasurementSeed::pure_single_mode(std::exp(log_lambda), phi);
    return detail::log_det_spd(
        conditional_cm(cm, measured, seed).matrix());
  };
  const std::vector<double> log_lambda_axis =
      linspace(std::log(1e-3), std::log(1e3), grid_density);
  const std::vector<double> phi_axis = linspace(0.0, M_PI, grid_density);

  // The optimum may sit in the homodyne limit; refinement follows it past
  // the grid edge, capped where the Schur solve stays well conditioned.
  // The phi axis is pi-periodic, so refinement roams freely across the
  // wrap-around and the witness is folded back at the end.
  const Refined2D opt = grid_refine_2d(
      objective, log_lambda_axis, phi_axis, refine_tol, std::log(1e-9),
      std::log(1e9), -4.0 * M_PI, 4.0 * M_PI);

  MeasureReport report;
  report.value = 0.5 * (logdet_a - opt.value);
  report.method = SolveMethod::numeric;
  report.converged = opt.converged;
  report.iterations = opt.iterations;
  report.lambda = std::exp(opt.x0);
  report.phi = opt.x1 - M_PI * std::floor(opt.x1 / M_PI);
  return report;
}

// Numerical search over pure two-mode seeds (Euler chart) through the
// Schur complement.
MeasureReport numeric_two_mode(const CovarianceMatrix& cm,
                               const std::vector<int>& measured,
                               double refine_tol) {
  const std::vector<int> kept = complement_modes(cm.modes(), measured);
  const double logdet_a = logdet_group(cm, kept);

  const auto objective = [&](const std::vector<double>& p) {
    const std::array<double, 6> params = {p[0], p[1], p[2],
                                          p[3], p[4], p[5]};
    const Eigen::MatrixXd g = detail::euler_symplectic_two_mode(params);
    MeasurementSeed seed;
    seed.gamma = g * g.transpose();
    return detail::log_det_spd(
        conditional_cm(cm, measured, seed).matrix());
  };

  const std::vector<std::vector<double>> starts = {
      {0, 0, 0, 0, 0, 0},          {0.3, 0.7, 0.2, 0.5, 1.0, -1.0},
      {1.1, 0.4, 1.3, 0.2, 2.0, 0.5}, {0.9, 1.8, 0.6, 1.2, -1.5, 1.5}};

  MeasureReport report;
  report.method = SolveMethod::numeric;
  bool first = true;
  for (const auto& start : starts) {
    const PatternMinimum m = compass_minimize(objective, start,
                                              std::vector<double>(6, 0.4),
                                              refine_tol, 4000);
    const double value = 0.5 * (logdet_a - m.value);
    if (first || value > report.value) {
      first = false;
      report.value = value;
      report.converged = m.converged;
      report.iterations = m.iterations;
    }
  }
  return report;
}

}  // namespace

MeasurementSeed MeasurementSeed::pure_single_mode(double lambda, double phi) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument(
        "pure_single_mode: lambda must be positive and finite");
  }
  Eigen::Matrix2d rot;
  rot << std::cos(phi), -std::sin(phi), std::sin(phi), std::cos(phi);
  Eigen::Matrix2d diag = Eigen::Matrix2d::Zero();
  diag(0, 0) = lambda;
  diag(1, 1) = 1.0 / lambda;
  MeasurementSeed seed;
  seed.gamma = rot * diag * rot.transpose();
  return seed;
}

double mutual_information(const CovarianceMatrix& cm,
                          const ModePartition& partition) {
  if (partition.groups.size() != 2 || partition.groups[0].empty() ||
      partition.groups[1].empty()) {
    throw std::invalid_argument(
        "mutual_information: need two non-empty groups");
  }
  detail::check_partition(cm, partition, /*require_cover=*/true);
  return 0.5 * (logdet_group(cm, partition.groups[0]) +
                logdet_group(cm, partition.groups[1]) -
                detail::log_det_spd(cm.matrix()));
}

double ssa_gap(const CovarianceMatrix& cm, const ModePartition& partition) {
  if (partition.groups.size() != 3) {
    throw std::invalid_argument("ssa_gap: need exactly three groups");
  }
  detail::check_partition(cm, partition, /*require_cover=*/true);
  const auto& a = partition.groups[0];
  const auto& b = partition.groups[1];
  const auto& c = partition.groups[2];
  return 0.5 * (logdet_group(cm, concat(a, b)) +
                logdet_group(cm, concat(b, c)) -
                detail::log_det_spd(cm.matrix()) - logdet_group(cm, b));
}

CovarianceMatrix conditional_cm(const CovarianceMatrix& cm,
                                const std::vector<int>& measured_modes,
                                const MeasurementSeed& seed) {
  ModePartition check;
  check.groups = {measured_modes};
  detail::check_partition(cm, check, /*require_cover=*/false);
  if (measured_modes.empty() ||
      static_cast<int>(measured_modes.size()) >= cm.modes()) {
    throw std::invalid_argument(
        "conditional_cm: measured modes must be a proper non-empty subset");
  }
  const int nb = static_cast<int>(measured_modes.size());
  if (seed.gamma.rows() != 2 * nb || seed.gamma.cols() != 2 * nb) {
    throw std::invalid_argument(
        "conditional_cm: seed size does not match the measured modes");
  }

  const std::vector<int> kept = complement_modes(cm.modes(), measured_modes);
  const std::vector<int> ia = detail::quadrature_indices(kept);
  const std::vector<int> ib = detail::quadrature_indices(measured_modes);

  const int da = static_cast<int>(ia.size());
  const int db = static_cast<int>(ib.size());
  Eigen::MatrixXd ga(da, da);
  Eigen::MatrixXd gb(db, db);
  Eigen::MatrixXd cross(da, db);
  for (int r = 0; r < da; ++r) {
    for (int c = 0; c < da; ++c) ga(r, c) = cm.matrix()(ia[r], ia[c]);
    for (int c = 0; c < db; ++c) cross(r, c) = cm.matrix()(ia[r], ib[c]);
  }
  for (int r = 0; r < db; ++r) {
    for (int c = 0; c < db; ++c) gb(r, c) = cm.matrix()(ib[r], ib[c]);
  }

  const Eigen::MatrixXd total = gb + seed.gamma;
  Eigen::LLT<Eigen::MatrixXd> llt(total);
  if (llt.info() != Eigen::Success) {
    throw std::domain_error("conditional_cm: singular seed + marginal sum");
  }
  const Eigen::MatrixXd schur =
      ga - cross * llt.solve(cross.transpose());
  return CovarianceMatrix(0.5 * (schur + schur.transpose()));
}

MeasureReport classical_correlations(const CovarianceMatrix& cm,
                                     Direction direction) {
  if (cm.modes() != 2) {
    return classical_correlations_numeric(cm, direction);
  }
  const CovarianceMatrix oriented =
      direction == Direction::measure_b ? cm : swap_two_modes(cm);
  const TwoModeStandardForm sf = to_standard_form(oriented);
  const double min_det = detail::min_conditional_det_closed(sf);

  MeasureReport report;
  report.value = std::log(sf.a) - 0.5 * std::log(min_det);
  report.method = SolveMethod::closed_form;
  return report;
}

MeasureReport classical_correlations_numeric(
    const CovarianceMatrix& cm, const std::vector<int>& measured_modes,
    int grid_density, double refine_tol) {
  ModePartition check;
  check.groups = {measured_modes};
  detail::check_partition(cm, check, /*require_cover=*/false);
  if (measured_modes.empty() ||
      static_cast<int>(measured_modes.size()) >= cm.modes()) {
    throw std::invalid_argument(
        "classical_correlations_numeric: measured modes must be a proper "
        "non-empty subset");
  }
  switch (measured_modes.size()) {
    case 1:
      return numeric_single_mode(cm, measured_modes, grid_density,
                                 refine_tol);
    case 2:
      return numeric_two_mode(cm, measured_modes, refine_tol);
    default:
      throw std::invalid_argument(
          "classical_correlations_numeric: measured subsystems larger than "
          "2 modes are not supported");
  }
}

MeasureReport classical_correlations_numeric(const CovarianceMatrix& cm,
                                             Direction direction,
                                             int grid_density,
                                             double refine_tol) {
  return classical_correlations_numeric(cm, measured_group(cm, direction),
                                        grid_density, refine_tol);
}

MeasureReport discord(const CovarianceMatrix& cm, Direction direction) {
  const std::vector<int> measured = measured_group(cm, direction);
  const std::vector<int> kept = complement_modes(cm.modes(), measured);
  ModePartition split;
  split.groups = {kept, measured};
  const double info = mutual_information(cm, split);

  MeasureReport report = classical_correlations(cm, direction);
  report.value = info - report.value;
  return report;
}

SeedSearchResult seed_search(const CovarianceMatrix& cm, Direction direction,
                             int grid_density, double refine_tol) {
  if (cm.modes() != 2) {
    throw std::invalid_argument("seed_search: state must have 2 modes");
  }
  const CovarianceMatrix oriented =
      direction == Direction::measure_b ? cm : swap_two_modes(cm);
  const TwoModeStandardForm sf = to_standard_form(oriented);

  const auto objective = [&](double log_lambda, double phi) {
    return detail::conditional_det_standard_form(sf, std::exp(log_lambda),
                                                 phi);
  };
  const std::vector<double> log_lambda_axis =
      linspace(std::log(1e-3), std::log(1e3), grid_density);
  const std::vector<double> phi_axis = linspace(0.0, M_PI, grid_density);
  // The explicit determinant expression is algebraic in lambda, so the
  // refinement can chase the homodyne limit much further than the grid;
  // phi roams across the wrap-around and is folded back.
  const Refined2D opt = grid_refine_2d(
      objective, log_lambda_axis, phi_axis, refine_tol, std::log(1e-10),
      std::log(1e10), -4.0 * M_PI, 4.0 * M_PI);

  SeedSearchResult result;
  result.lambda = std::exp(opt.x0);
  result.phi = opt.x1 - M_PI * std::floor(opt.x1 / M_PI);
  result.det_value = opt.value;
  return result;
}

namespace detail {

double min_conditional_det_closed(const TwoModeStandardForm& sf) {
  const double a = sf.a;
  const double b = sf.b;
  const double cp2 = sf.c_plus * sf.c_plus;
  const double cm2 = sf.c_minus * sf.c_minus;
  const double scale = 1.0 + a * a * b * b;

  if (cp2 + cm2 <= 1e-14 * scale) {
    return a * a;  // product state, measurement changes nothing
  }
  const double t1 = a * b * b * cm2 - cp2 * (a + b * cm2);
  const double t2 = a * b * b * cp2 - cm2 * (a + b * cp2);
  if (t1 * t2 < 0.0) {
    return a * (a - cp2 / b);
  }
  const double bsq = b * b - 1.0;
  if (bsq <= 1e-12) {
    // A physical state with a pure marginal carries no correlations; the
    // product shortcut above covers it, anything else is roundoff.
    return a * a;
  }
  const double u = a * bsq - b * cm2;
  const double v = a * bsq - b * cp2;
  double rad = u * v;
  if (rad < -1e-9 * scale * scale) {
    throw std::domain_error(
        "min_conditional_det_closed: negative radicand outside tolerance");
  }
  rad = std::max(rad, 0.0);
  return (2.0 * std::abs(sf.c_minus * sf.c_plus) * std::sqrt(rad) + u * v +
          cm2 * cp2) /
         (bsq * bsq);
}

double conditional_det_standard_form(const TwoModeStandardForm& sf,
                                     double lambda, double phi) {
  const double a = sf.a;
  const double b = sf.b;
  const double cp2 = sf.c_plus * sf.c_plus;
  const double cm2 = sf.c_minus * sf.c_minus;
  const double num =
      2.0 * a * a * (b + lambda) * (1.0 + b * lambda) -
      a * (cp2 + cm2) * (2.0 * b * lambda + lambda * lambda + 1.0) +
      2.0 * cp2 * cm2 * lambda +
      a * (cp2 - cm2) * (lambda * lambda - 1.0) * std::cos(2.0 * phi);
  const double den = 2.0 * (b + lambda) * (1.0 + b * lambda);
  return num / den;
}

}  // namespace detail

}  // namespace gr2
