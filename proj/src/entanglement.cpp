#include "gr2/entanglement.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "gr2/optimize.hpp"

namespace gr2 {

namespace {

constexpr int kThetaGridPoints = 720;
constexpr int kOracleDefaultRestarts = 32;

// Shared layout of the m_theta / K-function radicals. The ratio term
// B / sqrt(R) is a removable 0/0 at symmetric boundaries (both vanish
// there); treat it as 0 when both are at roundoff scale and refuse
// anything else.
struct RadicalTerms {
  double k = 0.0;        // ab - c_minus^2
  double sqrt_r = 0.0;   // sqrt of the main radicand
  double ratio = 0.0;    // B / sqrt(R)
  double cross = 0.0;    // (c_plus k + c_minus)^2 / R, NaN when R ~ 0
  bool cross_defined = false;
};

RadicalTerms radical_terms(double a, double b, double cp, double cm) {
  const double scale = 1.0 + a * b;
  RadicalTerms t;
  t.k = a * b - cm * cm;
  double r = (a - b * t.k) * (b - a * t.k);
  if (r < -1e-9 * scale * scale * scale * scale) {
    throw std::domain_error("radical_terms: negative radicand");
  }
  r = std::max(r, 0.0);
  t.sqrt_r = std::sqrt(r);

  const double bracket =
      2.0 * a * b * cm * cm * cm + (a * a + b * b) * cp * cm * cm +
      ((1.0 - 2.0 * b * b) * a * a + b * b) * cm -
      a * b * (a * a + b * b - 2.0) * cp;

  const double s2 = scale * scale;
  if (t.sqrt_r <= 1e-9 * s2) {
    if (std::abs(bracket) <= 1e-6 * s2 * s2) {
      t.ratio = 0.0;
      t.cross_defined = false;
    } else {
      throw std::domain_error("radical_terms: vanishing radicand with a "
                              "finite numerator");
    }
  } else {
    t.ratio = bracket / t.sqrt_r;
    const double num = cp * t.k + cm;
    t.cross = (num / t.sqrt_r) * (num / t.sqrt_r);
    t.cross_defined = true;
  }
  return t;
}

double m_theta_impl(const TwoModeStandardForm& sf, double theta,
                    double cross_term) {
  const double a = sf.a;
  const double b = sf.b;
  const double cp = sf.c_plus;
  const double cm = sf.c_minus;
  const RadicalTerms t = radical_terms(a, b, cp, cm);

  const double cos_t = std::cos(theta);
  const double sin_t = std::sin(theta);

  double inner = 0.0;
  if (t.cross_defined) {
    inner = 1.0 - t.cross;
    if (inner < -1e-9) {
      // The sin-theta term only matters when its coefficient is nonzero.
      if (std::abs(sin_t * (a * a - b * b)) > 1e-14) {
        throw std::domain_error("m_theta: negative inner radicand");
      }
      inner = 0.0;
    }
    inner = std::max(inner, 0.0);
  }

  const double num = cp * t.k - cm + cos_t * t.sqrt_r;
  const double den =
      2.0 * t.k *
      (a * a + b * b + 2.0 * cross_term +
       sin_t * (a * a - b * b) * std::sqrt(inner) - cos_t * t.ratio);
  if (!(den > 0.0)) {
    // Outside the range where the expression is a valid bound.
    return std::numeric_limits<double>::infinity();
  }
  return 1.0 + num * num / den;
}

struct ThetaMinimum {
  double m = std::numeric_limits<double>::infinity();
  double theta = 0.0;
};

// Grid plus golden-section minimization of the theta family. Throws
// std::domain_error when the expression leaves its domain anywhere on the
// grid.
ThetaMinimum min_m_theta(const TwoModeStandardForm& sf, double cross_term) {
  ThetaMinimum best;
  for (int i = 0; i < kThetaGridPoints; ++i) {
    const double theta =
        2.0 * M_PI * static_cast<double>(i) / kThetaGridPoints;
    const double m = m_theta_impl(sf, theta, cross_term);
    if (m < best.m) {
      best.m = m;
      best.theta = theta;
    }
  }
  if (std::isfinite(best.m)) {
    const double h = 2.0 * M_PI / kThetaGridPoints;
    const ScalarMinimum refined = golden_section_min(
        [&](double th) { return m_theta_impl(sf, th, cross_term); },
        best.theta - h, best.theta + h, 1e-12);
    if (refined.value < best.m) {
      best.m = refined.value;
      best.theta = refined.x;
    }
  }
  return best;
}

// Smaller PPT symplectic eigenvalue straight from a standard-form tuple.
double ppt_nu_min_from_tuple(const TwoModeStandardForm& sf) {
  const double i1 = sf.a * sf.a;
  const double i2 = sf.b * sf.b;
  const double i3 = sf.c_plus * sf.c_minus;
  const double i4 = (sf.a * sf.b - sf.c_plus * sf.c_plus) *
                    (sf.a * sf.b - sf.c_minus * sf.c_minus);
  const double delta = i1 + i2 - 2.0 * i3;
  const double disc = std::max(delta * delta - 4.0 * i4, 0.0);
  return std::sqrt(std::max(0.5 * (delta - std::sqrt(disc)), 0.0));
}

double k_function_impl(double a, double b, double cp, double cm,
                       bool variant_cross) {
  TwoModeStandardForm sf;
  sf.a = a;
  sf.b = b;
  sf.c_plus = cp;
  sf.c_minus = cm;
  // The uncertainty margin is the product (nu+^2 - 1)(nu-^2 - 1), which
  // both-eigenvalues-below-one tuples also satisfy; Delta >= 2 separates
  // the physical branch.
  const double scale = 1.0 + a * b;
  const double delta = a * a + b * b + 2.0 * cp * cm;
  if (a < 1.0 - 1e-9 || b < 1.0 - 1e-9 || a * b - cp * cp <= 0.0 ||
      sf.uncertainty_margin() < -1e-9 * scale * scale ||
      delta < 2.0 - 1e-9) {
    throw std::domain_error("k_function: unphysical tuple");
  }
  const double j = a * a * (1.0 + b) * (1.0 + b) /
                   ((a + a * b - cp * cp) * (a + a * b - cm * cm));
  // Separable tuples sit at the trivial bound; the theta family only
  // bounds the entangled ones.
  double m = 1.0;
  if (ppt_nu_min_from_tuple(sf) < 1.0 - kPhysicalTol) {
    const double cross_term = variant_cross ? cp * cp : cp * cm;
    const ThetaMinimum opt = min_m_theta(sf, cross_term);
    if (!std::isfinite(opt.m)) {
      throw std::domain_error("k_function: empty theta domain");
    }
    m = std::max(opt.m, 1.0);
  }
  return j - m;
}

// Pure two-mode covariance matrix anchored at a symplectic M0:
// sigma(p) = (M0 G(p)) (M0 G(p))^T with G from the Euler chart. p = 0
// reproduces M0 M0^T.
Eigen::Matrix4d anchored_pure_cm(const Eigen::Matrix4d& m0,
                                 const std::vector<double>& p) {
  const std::array<double, 6> params = {p[0], p[1], p[2], p[3], p[4], p[5]};
  const Eigen::Matrix4d m = m0 * detail::euler_symplectic_two_mode(params);
  return m * m.transpose();
}

double min_eigenvalue(const Eigen::Matrix4d& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(m);
  return solver.eigenvalues().minCoeff();
}

int third_mode(int i, int j) { return 3 - i - j; }

void check_pair(int i, int j) {
  if (i < 0 || i > 2 || j < 0 || j > 2 || i == j) {
    throw std::invalid_argument("mode pair must be two distinct indices "
                                "in {0, 1, 2}");
  }
}

double beta_factor(const ThreeModeLocalInvariants& inv) {
  const double s1 = inv.a1 * inv.a1;
  const double s2 = inv.a2 * inv.a2;
  const double s3 = inv.a3 * inv.a3;
  double delta = 1.0;
  for (double m : {1.0, -1.0}) {
    for (double n : {1.0, -1.0}) {
      const double x = inv.a1 + m * inv.a2 + n * inv.a3;
      delta *= x * x - 1.0;
    }
  }
  delta = std::max(delta, 0.0);
  return -1.0 + 2.0 * (s1 + s2 + s3) + 2.0 * (s1 * s2 + s1 * s3 + s2 * s3) -
         s1 * s1 - s2 * s2 - s3 * s3 - std::sqrt(delta);
}

}  // namespace

double ThreeModeLocalInvariants::value(int index) const {
  switch (index) {
    case 0:
      return a1;
    case 1:
      return a2;
    case 2:
      return a3;
    default:
      throw std::invalid_argument("mode index must be in {0, 1, 2}");
  }
}

bool ThreeModeLocalInvariants::triangle_ok(double tol) const {
  const std::array<double, 3> a = {a1, a2, a3};
  if (a1 < 1.0 - tol || a2 < 1.0 - tol || a3 < 1.0 - tol) {
    return false;
  }
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    if (a[i] < std::abs(a[j] - a[k]) + 1.0 - tol) return false;
    if (a[i] > a[j] + a[k] - 1.0 + tol) return false;
  }
  return true;
}

double ppt_min_symplectic_eigenvalue(const CovarianceMatrix& cm) {
  const LocalInvariants inv = local_invariants(cm);
  const double delta = inv.i1 + inv.i2 - 2.0 * inv.i3;
  const double disc = std::max(delta * delta - 4.0 * inv.i4, 0.0);
  return std::sqrt(std::max(0.5 * (delta - std::sqrt(disc)), 0.0));
}

double m_theta(const TwoModeStandardForm& sf, double theta) {
  return m_theta_impl(sf, theta, sf.c_plus * sf.c_minus);
}

MeasureReport e2_two_mode(const CovarianceMatrix& cm) {
  if (cm.modes() != 2) {
    throw std::invalid_argument("e2_two_mode: state must have 2 modes");
  }
  MeasureReport report;
  report.method = SolveMethod::closed_form;

  if (ppt_min_symplectic_eigenvalue(cm) >= 1.0 - kPhysicalTol) {
    report.value = 0.0;
    return report;
  }
  if (is_pure(cm)) {
    report.value = renyi2_entropy(reduce(cm, {0}));
    return report;
  }

  const TwoModeStandardForm sf = to_standard_form(cm);
  bool domain_ok = true;
  ThetaMinimum opt;
  try {
    opt = min_m_theta(sf, sf.c_plus * sf.c_minus);
    report.iterations = kThetaGridPoints;
  } catch (const std::domain_error&) {
    domain_ok = false;
  }

  if (domain_ok && std::isfinite(opt.m) && opt.m >= 1.0 - 1e-9) {
    report.value = 0.5 * std::log(std::max(opt.m, 1.0));
    report.theta = opt.theta;
    return report;
  }

  // Domain failure: fall back to the direct convex-roof search.
  Rng rng(0x6f7261636c65ULL);
  report = convex_roof_oracle(cm, kOracleDefaultRestarts, rng);
  report.method = SolveMethod::numeric;
  return report;
}

MeasureReport convex_roof_oracle(const CovarianceMatrix& cm, int restarts,
                                 Rng& rng) {
  if (cm.modes() != 2) {
    throw std::invalid_argument(
        "convex_roof_oracle: state must have 2 modes");
  }
  if (restarts < 1) {
    throw std::invalid_argument("convex_roof_oracle: restarts must be >= 1");
  }
  const Eigen::Matrix4d gamma = cm.matrix();
  const WilliamsonForm w = williamson(cm);
  const Eigen::Matrix4d anchor = w.symplectic;

  constexpr double kFeasTol = 1e-10;
  double best_value = std::numeric_limits<double>::infinity();
  std::vector<double> best_params(6, 0.0);
  bool any_converged = false;
  int total_iterations = 0;

  double barrier_weight = 0.0;
  const auto evaluate = [&](const std::vector<double>& p) {
    const Eigen::Matrix4d sigma = anchored_pure_cm(anchor, p);
    const double objective =
        0.5 * std::log(sigma.topLeftCorner<2, 2>().determinant());
    const double feas = min_eigenvalue(gamma - sigma);
    if (feas >= -kFeasTol && objective < best_value) {
      best_value = objective;
      best_params = p;
    }
    if (feas <= 0.0) {
      return objective + 1e6 * (-feas) + barrier_weight * 700.0;
    }
    // Log barrier keeps simplex iterates strictly interior; its weight is
    // driven to zero so the boundary optimum is approached smoothly.
    return barrier_weight > 0.0
               ? objective - barrier_weight * std::log(feas)
               : objective;
  };

  const auto random_point = [&rng]() {
    std::vector<double> p(6);
    for (int d = 0; d < 4; ++d) {
      p[static_cast<std::size_t>(d)] = rng.uniform(-M_PI, M_PI);
    }
    p[4] = rng.uniform(-2.0, 2.0);
    p[5] = rng.uniform(-2.0, 2.0);
    return p;
  };

  // Feasible starts: the r = 0 fiber is the Williamson floor (feasible for
  // any rotation block), so points with small squeeze stay inside; a
  // random walk with rejection then disperses them over the feasible set.
  const auto feasible_point = [&]() {
    std::vector<double> p(6);
    for (int d = 0; d < 4; ++d) {
      p[static_cast<std::size_t>(d)] = rng.uniform(-M_PI, M_PI);
    }
    p[4] = rng.uniform(-0.2, 0.2);
    p[5] = rng.uniform(-0.2, 0.2);
    const auto feasible = [&](const std::vector<double>& q) {
      return min_eigenvalue(gamma - anchored_pure_cm(anchor, q)) >= 0.0;
    };
    if (!feasible(p)) {
      p[4] = 0.0;
      p[5] = 0.0;
    }
    for (int step = 0; step < 60; ++step) {
      std::vector<double> trial = p;
      for (auto& v : trial) {
        v += rng.uniform(-0.15, 0.15);
      }
      if (feasible(trial)) {
        p = trial;
      }
    }
    return p;
  };

  // Penalized simplex descent: the basin choice must happen on the plain
  // penalized landscape (a strong barrier would re-funnel every start to
  // the dominant attractor); a weak barrier polishes only at the end.
  const auto descend = [&](const std::vector<double>& start) {
    barrier_weight = 0.0;
    PatternMinimum stage = compass_minimize(
        evaluate, start, std::vector<double>(6, 0.4), 1e-7, 500);
    total_iterations += stage.iterations;
    for (double step : {0.05, 1e-3, 1e-5}) {
      stage = nelder_mead(evaluate, stage.x, step, 1e-13, 1500);
      total_iterations += stage.iterations;
    }
    for (double mu : {1e-8, 1e-10, 0.0}) {
      barrier_weight = mu;
      stage = nelder_mead(evaluate, stage.x, 1e-6, 1e-13, 800);
      total_iterations += stage.iterations;
    }
    barrier_weight = 0.0;
    any_converged = any_converged || stage.converged;
    return stage.value;
  };

  // The global basin can have a small catchment volume, so restart rounds
  // extend adaptively until several independent descents confirm the
  // incumbent minimum.
  long hits = 0;
  double consensus_level = std::numeric_limits<double>::infinity();
  const auto record = [&](double descent_value) {
    if (best_value < consensus_level - 1e-6) {
      consensus_level = best_value;
      hits = 0;
    }
    if (descent_value < consensus_level + 1e-6) {
      ++hits;
    }
  };
  for (int attempt = 0; attempt < restarts; ++attempt) {
    std::vector<double> start(6, 0.0);
    if (attempt > 0) {
      start = attempt % 3 == 0 ? random_point() : feasible_point();
    }
    record(descend(start));
  }
  for (int extra = 0; extra < 16 * restarts && hits < 3; ++extra) {
    record(descend(extra % 3 == 0 ? random_point() : feasible_point()));
  }

  // Escape rounds: optima restricted to a symmetric submanifold (for
  // example block-diagonal in the Williamson frame) trap descents because
  // the symmetry-breaking gain is second order. Perturb the incumbent at
  // several scales and re-descend until no direction improves.
  for (int round = 0; round < 4; ++round) {
    const double before = best_value;
    for (int dir = 0; dir < 10; ++dir) {
      std::vector<double> direction(6);
      double norm = 0.0;
      for (auto& v : direction) {
        v = rng.normal();
        norm += v * v;
      }
      norm = std::sqrt(norm);
      for (double delta : {0.01, 0.04, 0.12}) {
        for (double sign : {1.0, -1.0}) {
          std::vector<double> q = best_params;
          for (int d = 0; d < 6; ++d) {
            q[static_cast<std::size_t>(d)] +=
                sign * delta / norm * direction[static_cast<std::size_t>(d)];
          }
          barrier_weight = 0.0;
          double step = delta / 3.0;
          PatternMinimum stage{q, 0.0, 0, false};
          for (int sub = 0; sub < 2; ++sub) {
            stage = nelder_mead(evaluate, stage.x, step, 1e-12, 600);
            total_iterations += stage.iterations;
            step = std::max(0.02 * step, 1e-6);
          }
        }
      }
    }
    if (best_value > before - 1e-10) {
      break;
    }
  }

  // Intensification from the best feasible point seen so far.
  for (int cycle = 0; cycle < 2; ++cycle) {
    PatternMinimum stage{best_params, best_value, 0, false};
    double step = cycle == 0 ? 1e-3 : 1e-5;
    for (double mu : {1e-8, 1e-10, 0.0}) {
      barrier_weight = mu;
      stage = nelder_mead(evaluate, stage.x, step, 1e-14, 2500);
      total_iterations += stage.iterations;
      step = 0.05 * step;
    }
    barrier_weight = 0.0;
  }

  // Endgame: the optimum generically touches with a doubly degenerate
  // zero eigenvalue of gamma - sigma, so lambda_min has a kink there and
  // direct descent stalls. The sum and product of the two smallest
  // eigenvalues stay smooth across the degeneracy; descend projected onto
  // the tangent space of whichever of them are active.
  {
    const auto objective_of = [&](const std::vector<double>& p) {
      const Eigen::Matrix4d sigma = anchored_pure_cm(anchor, p);
      return 0.5 * std::log(sigma.topLeftCorner<2, 2>().determinant());
    };
    const auto low_pair = [&](const std::vector<double>& p) {
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(
          gamma - anchored_pure_cm(anchor, p));
      const Eigen::Vector4d ev = solver.eigenvalues();  // ascending
      return std::pair<double, double>(ev(0) + ev(1), ev(0) * ev(1));
    };
    const auto feasibility_of = [&](const std::vector<double>& p) {
      return min_eigenvalue(gamma - anchored_pure_cm(anchor, p));
    };

    using Vec6 = Eigen::Matrix<double, 6, 1>;
    const auto fd_grad = [&](const std::function<double(
                                 const std::vector<double>&)>& f,
                             const std::vector<double>& p) {
      Vec6 g;
      const double h = 1e-6;
      for (int d = 0; d < 6; ++d) {
        std::vector<double> hi = p;
        std::vector<double> lo = p;
        hi[static_cast<std::size_t>(d)] += h;
        lo[static_cast<std::size_t>(d)] -= h;
        g(d) = (f(hi) - f(lo)) / (2.0 * h);
      }
      return g;
    };

    std::vector<double> p = best_params;
    double value = objective_of(p);
    double step = 1e-4;
    for (int iter = 0; iter < 900 && step > 1e-13; ++iter) {
      ++total_iterations;
      Vec6 g = fd_grad(objective_of, p);

      const auto [low_sum, low_prod] = low_pair(p);
      std::vector<Vec6> normals;
      if (std::abs(low_sum) < 1e-6) {
        normals.push_back(fd_grad(
            [&](const std::vector<double>& q) { return low_pair(q).first; },
            p));
      }
      if (std::abs(low_prod) < 1e-6) {
        normals.push_back(fd_grad(
            [&](const std::vector<double>& q) {
              return low_pair(q).second;
            },
            p));
      }
      if (!normals.empty()) {
        // Gram projection onto the joint tangent space.
        const int m = static_cast<int>(normals.size());
        Eigen::MatrixXd gram(m, m);
        Eigen::VectorXd rhs(m);
        for (int r = 0; r < m; ++r) {
          for (int c = 0; c < m; ++c) {
            gram(r, c) = normals[static_cast<std::size_t>(r)].dot(
                normals[static_cast<std::size_t>(c)]);
          }
          rhs(r) = normals[static_cast<std::size_t>(r)].dot(g);
        }
        const Eigen::VectorXd coeff =
            gram.ldlt().solve(rhs);
        for (int r = 0; r < m; ++r) {
          g -= coeff(r) * normals[static_cast<std::size_t>(r)];
        }
      }
      const double gnorm = g.norm();
      if (gnorm < 1e-12) break;

      std::vector<double> trial = p;
      for (int d = 0; d < 6; ++d) {
        trial[static_cast<std::size_t>(d)] -= step / gnorm * g(d);
      }
      const double trial_value = objective_of(trial);
      if (feasibility_of(trial) >= -kFeasTol && trial_value < value) {
        p = trial;
        value = trial_value;
        if (value < best_value) {
          best_value = value;
          best_params = p;
        }
        step *= 1.7;
      } else {
        step *= 0.45;
      }
    }
  }

  MeasureReport report;
  report.method = SolveMethod::numeric;
  report.converged = any_converged && std::isfinite(best_value);
  report.iterations = total_iterations;
  report.value = std::max(best_value, 0.0);
  return report;
}

double e2_pure_bipartition(const CovarianceMatrix& cm,
                           const ModePartition& partition) {
  if (!is_pure(cm)) {
    throw std::invalid_argument("e2_pure_bipartition: state is not pure");
  }
  if (partition.groups.size() != 2 || partition.groups[0].empty() ||
      partition.groups[1].empty()) {
    throw std::invalid_argument(
        "e2_pure_bipartition: need two non-empty groups");
  }
  detail::check_partition(cm, partition, /*require_cover=*/true);
  return renyi2_entropy(reduce(cm, partition.groups[0]));
}

CovarianceMatrix three_mode_pure_cm(const ThreeModeLocalInvariants& inv) {
  if (!inv.triangle_ok()) {
    throw std::invalid_argument(
        "three_mode_pure_cm: triangle condition violated");
  }
  const std::array<double, 3> a = {inv.a1, inv.a2, inv.a3};
  std::array<double, 3> c_plus{};
  std::array<double, 3> c_minus{};
  for (int k = 0; k < 3; ++k) {
    const double ak = a[static_cast<std::size_t>(k)];
    const double ai = a[static_cast<std::size_t>((k + 1) % 3)];
    const double aj = a[static_cast<std::size_t>((k + 2) % 3)];
    const double diff = ai - aj;
    const double sum = ai + aj;
    double r1 = ((ak - 1.0) * (ak - 1.0) - diff * diff) *
                ((ak + 1.0) * (ak + 1.0) - diff * diff);
    double r2 = ((ak - 1.0) * (ak - 1.0) - sum * sum) *
                ((ak + 1.0) * (ak + 1.0) - sum * sum);
    const double scale = 1.0 + ak * ak * sum * sum;
    if (r1 < -1e-9 * scale || r2 < -1e-9 * scale) {
      throw std::domain_error("three_mode_pure_cm: negative radicand");
    }
    r1 = std::sqrt(std::max(r1, 0.0));
    r2 = std::sqrt(std::max(r2, 0.0));
    const double denom = 4.0 * std::sqrt(ai * aj);
    c_plus[static_cast<std::size_t>(k)] = (r1 + r2) / denom;
    c_minus[static_cast<std::size_t>(k)] = (r1 - r2) / denom;
  }

  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
  for (int i = 0; i < 3; ++i) {
    m(2 * i, 2 * i) = a[static_cast<std::size_t>(i)];
    m(2 * i + 1, 2 * i + 1) = a[static_cast<std::size_t>(i)];
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const int k = third_mode(i, j);
      m(2 * i, 2 * j) = m(2 * j, 2 * i) =
          c_plus[static_cast<std::size_t>(k)];
      m(2 * i + 1, 2 * j + 1) = m(2 * j + 1, 2 * i + 1) =
          c_minus[static_cast<std::size_t>(k)];
    }
  }
  return CovarianceMatrix(std::move(m));
}

double g_reduced(const ThreeModeLocalInvariants& inv, int i, int j) {
  check_pair(i, j);
  if (!inv.triangle_ok()) {
    throw std::invalid_argument("g_reduced: triangle condition violated");
  }
  const int k = third_mode(i, j);
  const double ai = inv.value(i);
  const double aj = inv.value(j);
  const double ak = inv.value(k);
  const double si = ai * ai;
  const double sj = aj * aj;

  if (ak >= std::sqrt(si + sj - 1.0)) {
    return 1.0;  // separable reduction
  }
  const double gap = si - sj;
  const double alpha_k = std::sqrt(
      (2.0 * (si + sj) + gap * gap +
       std::abs(gap) * std::sqrt(gap * gap + 8.0 * (si + sj))) /
      (2.0 * (si + sj)));
  if (ak <= alpha_k) {
    const double ratio = gap / (ak * ak - 1.0);
    return ratio * ratio;
  }
  return beta_factor(inv) / (8.0 * ak * ak);
}

InseparabilityClass classify_inseparability(
    const ThreeModeLocalInvariants& inv) {
  InseparabilityClass result;
  result.fully_inseparable = true;
  for (int k = 0; k < 3; ++k) {
    const int i = (k + 1) % 3;
    const int j = (k + 2) % 3;
    const double ai = inv.value(i);
    const double aj = inv.value(j);
    const double ak = inv.value(k);
    const double hi = std::sqrt(ai * ai + aj * aj - 1.0);
    int branch = 2;
    if (ak >= hi) {
      branch = 1;
    } else {
      const double si = ai * ai;
      const double sj = aj * aj;
      const double gap = si - sj;
      const double alpha_k = std::sqrt(
          (2.0 * (si + sj) + gap * gap +
           std::abs(gap) * std::sqrt(gap * gap + 8.0 * (si + sj))) /
          (2.0 * (si + sj)));
      if (ak <= alpha_k) {
        branch = 3;
      }
    }
    result.pair_branch[static_cast<std::size_t>(k)] = branch;
    if (!(std::abs(ai - aj) + 1.0 < ak && ak < hi)) {
      result.fully_inseparable = false;
    }
  }
  return result;
}

double residual_e2(const ThreeModeLocalInvariants& inv, int focus) {
  if (focus < 0 || focus > 2) {
    throw std::invalid_argument("residual_e2: focus must be in {0, 1, 2}");
  }
  const int j = (focus + 1) % 3;
  const int k = (focus + 2) % 3;
  const double a_focus = inv.value(focus);
  return std::log(a_focus) - 0.5 * std::log(g_reduced(inv, focus, j)) -
         0.5 * std::log(g_reduced(inv, focus, k));
}

double residual_e2_invariant(const ThreeModeLocalInvariants& inv) {
  if (!classify_inseparability(inv).fully_inseparable) {
    throw std::domain_error(
        "residual_e2_invariant: state is outside the fully inseparable "
        "window");
  }
  const double beta = beta_factor(inv);
  const double prod = inv.a1 * inv.a2 * inv.a3;
  return 0.5 * std::log(64.0 * prod * prod / (beta * beta));
}

double monogamy_gap(const CovarianceMatrix& cm, int focus) {
  if (cm.modes() != 3 && cm.modes() != 4) {
    throw std::invalid_argument("monogamy_gap: state must have 3 or 4 modes");
  }
  if (!is_pure(cm)) {
    throw std::invalid_argument("monogamy_gap: state is not pure");
  }
  if (focus < 0 || focus >= cm.modes()) {
    throw std::invalid_argument("monogamy_gap: focus out of range");
  }
  double gap = renyi2_entropy(reduce(cm, {focus}));
  for (int j = 0; j < cm.modes(); ++j) {
    if (j == focus) continue;
    gap -= e2_two_mode(reduce(cm, {focus, j})).value;
  }
  return gap;
}

double kw_gap(const CovarianceMatrix& cm, int mode_a, int mode_b,
              int mode_c) {
  if (cm.modes() != 3) {
    throw std::invalid_argument("kw_gap: state must have 3 modes");
  }
  if (!is_pure(cm)) {
    throw std::invalid_argument("kw_gap: state is not pure");
  }
  ModePartition ordering;
  ordering.groups = {{mode_a}, {mode_b}, {mode_c}};
  detail::check_partition(cm, ordering, /*require_cover=*/true);

  const double entropy_a = renyi2_entropy(reduce(cm, {mode_a}));
  const double classical =
      classical_correlations(reduce(cm, {mode_a, mode_b}),
                             Direction::measure_b)
          .value;
  const double entanglement =
      e2_two_mode(reduce(cm, {mode_a, mode_c})).value;
  return entropy_a - classical - entanglement;
}

double k_function(double a, double b, double c_plus, double c_minus) {
  return k_function_impl(a, b, c_plus, c_minus, /*variant_cross=*/false);
}

double k_function_variant(double a, double b, double c_plus,
                          double c_minus) {
  return k_function_impl(a, b, c_plus, c_minus, /*variant_cross=*/true);
}

double je_gap(const CovarianceMatrix& cm) {
  if (cm.modes() != 2) {
    throw std::invalid_argument("je_gap: state must have 2 modes");
  }
  return classical_correlations(cm, Direction::measure_b).value -
         e2_two_mode(cm).value;
}

double residual_d2(const ThreeModeLocalInvariants& inv, int focus) {
  if (focus < 0 || focus > 2) {
    throw std::invalid_argument("residual_d2: focus must be in {0, 1, 2}");
  }
  const CovarianceMatrix cm = three_mode_pure_cm(inv);
  // For the pure global bipartition D2(focus | rest) = S2(rho_focus).
  double value = std::log(inv.value(focus));
  for (int offset = 1; offset <= 2; ++offset) {
    const int other = (focus + offset) % 3;
    const CovarianceMatrix pair = reduce(cm, {focus, other});
    value -= discord(pair, Direction::measure_b).value;
  }
  return value;
}

}  // namespace gr2
