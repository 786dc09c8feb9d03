#pragma once

#include <functional>
#include <vector>

namespace gr2 {

struct ScalarMinimum {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// Golden-section minimization of a unimodal function on [lo, hi].
/// Stops when the bracket is shorter than x_tol.
ScalarMinimum golden_section_min(const std::function<double(double)>& f,
                                 double lo, double hi, double x_tol,
                                 int max_iter = 200);

struct PatternMinimum {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Coordinate pattern (compass) search. Probes +-step along every
/// coordinate, moves to the best improvement, halves the steps when no
/// probe improves, and stops once every step is below step_tol.
PatternMinimum compass_minimize(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> start, std::vector<double> steps, double step_tol,
    int max_iter = 2000);

/// Nelder-Mead simplex descent with adaptive coefficients. Stops when the
/// simplex diameter falls below size_tol or after max_evals evaluations.
PatternMinimum nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& start, double init_step, double size_tol,
    int max_evals = 4000);

}  // namespace gr2
