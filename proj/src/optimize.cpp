#include "gr2/optimize.hpp"

#include <algorithm>
#include <cmath>

namespace gr2 {

ScalarMinimum golden_section_min(const std::function<double(double)>& f,
                                 double lo, double hi, double x_tol,
                                 int max_iter) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int iter = 0;
  while (b - a > x_tol && iter < max_iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
    ++iter;
  }
  ScalarMinimum result;
  result.x = 0.5 * (a + b);
  result.value = f(result.x);
  result.iterations = iter;
  // Keep the better probe if the midpoint is not it.
  if (fc < result.value) {
    result.x = c;
    result.value = fc;
  }
  if (fd < result.value) {
    result.x = d;
    result.value = fd;
  }
  return result;
}

PatternMinimum nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    const std::vector<double>& start, double init_step, double size_tol,
    int max_evals) {
  const std::size_t n = start.size();
  const double alpha = 1.0;
  const double gamma = 1.0 + 2.0 / static_cast<double>(n);
  const double rho = 0.75 - 0.5 / static_cast<double>(n);
  const double shrink = 1.0 - 1.0 / static_cast<double>(n);

  struct Vertex {
    std::vector<double> x;
    double value;
  };
  std::vector<Vertex> simplex;
  simplex.reserve(n + 1);
  int evals = 0;
  const auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return f(x);
  };
  simplex.push_back({start, eval(start)});
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x = start;
    x[i] += init_step;
    simplex.push_back({x, eval(x)});
  }
  const auto by_value = [](const Vertex& a, const Vertex& b) {
    return a.value < b.value;
  };

  while (evals < max_evals) {
    std::sort(simplex.begin(), simplex.end(), by_value);
    double diameter = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < n; ++d) {
        diameter = std::max(
            diameter, std::abs(simplex[i + 1].x[d] - simplex[0].x[d]));
      }
    }
    if (diameter < size_tol) {
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t d = 0; d < n; ++d) {
        centroid[d] += simplex[i].x[d] / static_cast<double>(n);
      }
    }
    const Vertex& worst = simplex[n];
    std::vector<double> reflected(n);
    for (std::size_t d = 0; d < n; ++d) {
      reflected[d] = centroid[d] + alpha * (centroid[d] - worst.x[d]);
    }
    const double f_reflected = eval(reflected);

    if (f_reflected < simplex[0].value) {
      std::vector<double> expanded(n);
      for (std::size_t d = 0; d < n; ++d) {
        expanded[d] = centroid[d] + gamma * (reflected[d] - centroid[d]);
      }
      const double f_expanded = eval(expanded);
      simplex[n] = f_expanded < f_reflected
                       ? Vertex{expanded, f_expanded}
                       : Vertex{reflected, f_reflected};
    } else if (f_reflected < simplex[n - 1].value) {
      simplex[n] = {reflected, f_reflected};
    } else {
      std::vector<double> contracted(n);
      const bool outside = f_reflected < worst.value;
      const std::vector<double>& toward = outside ? reflected : worst.x;
      for (std::size_t d = 0; d < n; ++d) {
        contracted[d] = centroid[d] + rho * (toward[d] - centroid[d]);
      }
      const double f_contracted = eval(contracted);
      if (f_contracted < std::min(f_reflected, worst.value)) {
        simplex[n] = {contracted, f_contracted};
      } else {
        for (std::size_t i = 1; i <= n; ++i) {
          for (std::size_t d = 0; d < n; ++d) {
            simplex[i].x[d] =
                simplex[0].x[d] + shrink * (simplex[i].x[d] - simplex[0].x[d]);
          }
          simplex[i].value = eval(simplex[i].x);
        }
      }
    }
  }
  std::sort(simplex.begin(), simplex.end(), by_value);
  PatternMinimum best;
  best.x = simplex[0].x;
  best.value = simplex[0].value;
  best.iterations = evals;
  best.converged = evals < max_evals;
  return best;
}

PatternMinimum compass_minimize(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> start, std::vector<double> steps, double step_tol,
    int max_iter) {
  const std::size_t dims = start.size();
  PatternMinimum best;
  best.x = std::move(start);
  best.value = f(best.x);

  int iter = 0;
  while (iter < max_iter) {
    ++iter;
    bool improved = false;
    for (std::size_t i = 0; i < dims; ++i) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> probe = best.x;
        probe[i] += sign * steps[i];
        const double value = f(probe);
        if (value < best.value) {
          best.value = value;
          best.x = std::move(probe);
          improved = true;
        }
      }
    }
    if (!improved) {
      double widest = 0.0;
      for (std::size_t i = 0; i < dims; ++i) {
        steps[i] *= 0.5;
        widest = std::max(widest, steps[i]);
      }
      if (widest < step_tol) {
        best.converged = true;
        break;
      }
    }
  }
  best.iterations = iter;
  return best;
}

}  // namespace gr2
