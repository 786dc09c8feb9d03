#include <cstdio>
#include "gr2/correlations.hpp"
#include "gr2/covariance.hpp"
#include "gr2/verify.hpp"
using namespace gr2;

int main() {
  Rng rng(11);
  double worst_schur = 0.0, worst_branch = 0.0;
  for (int i = 0; i < 500; ++i) {
    const CovarianceMatrix cm = random_mixed_cm(2, 1.5, 5.0, rng);
    const TwoModeStandardForm sf = to_standard_form(cm);
    worst_branch = std::max(worst_branch,
        std::abs(detail::min_conditional_det_closed(sf) -
                 seed_search(cm, Direction::measure_b).det_value));
    worst_schur = std::max(worst_schur,
        std::abs(classical_correlations(cm, Direction::measure_b).value -
                 classical_correlations_numeric(cm, Direction::measure_b).value));
  }
  std::printf("branch-vs-grid %.3e | closed-vs-schur %.3e over 500\n",
              worst_branch, worst_schur);
  return 0;
}
