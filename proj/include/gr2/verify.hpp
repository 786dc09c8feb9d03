#pragma once

#include <cstdint>
#include <string>

#include "gr2/covariance.hpp"
#include "gr2/entanglement.hpp"
#include "gr2/rng.hpp"

namespace gr2 {

/// Outcome of a randomized verification campaign. Failures count trials
/// violating the suite's inequality beyond the tolerance; worst_seed
/// replays the worst trial (as trial 0 of a one-trial campaign).
struct CampaignReport {
  std::string suite;
  long trials = 0;
  long failures = 0;
  double worst_value = 0.0;
  std::uint64_t worst_seed = 0;
  double elapsed_seconds = 0.0;
  long excluded = 0;  // domain failures skipped by sweeps, not serialized
};

struct CampaignOptions {
  long trials = 1000;
  std::uint64_t seed = 0;
  /// Negative means "use the suite default" (1e-9 for inequality suites,
  /// 1e-6 for equality suites, 3 standard errors for mc-entropy).
  double tol = -1.0;
  double squeeze_cap = 1.5;
  double temp_cap = 5.0;
  int modes = 3;            // monogamy suite: 3 or 4
  long mc_samples = 100000; // mc-entropy suite
};

/// Known suites: ssa, monogamy, kw, je, knonneg, discord-nonneg,
/// mc-entropy, residual-invariance. Throws std::invalid_argument for
/// anything else.
CampaignReport run_campaign(const std::string& suite,
                            const CampaignOptions& options);

double default_tolerance(const std::string& suite);

/// Single JSON line with the report fields.
std::string campaign_to_json(const CampaignReport& report);

/// Random physical standard-form tuple, by rejection sampling.
TwoModeStandardForm random_standard_form(Rng& rng, double a_cap = 4.0);

/// Random marginal invariants inside the fully inseparable window (with a
/// small interior margin), by rejection sampling.
ThreeModeLocalInvariants random_inseparable_triple(Rng& rng,
                                                   double a_cap = 3.0);

}  // namespace gr2
