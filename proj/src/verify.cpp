#include "gr2/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "gr2/phase_space.hpp"

namespace gr2 {

namespace {

enum class Bound { lower, upper };  // fail below -tol vs. fail above tol

struct TrialOutcome {
  double value = 0.0;
  bool excluded = false;
};

using TrialFn = std::function<TrialOutcome(Rng&, const CampaignOptions&)>;

TrialOutcome ssa_trial(Rng& rng, const CampaignOptions& opt) {
  const int config = static_cast<int>(rng.uniform() * 3.0);
  ModePartition partition;
  int n_modes = 3;
  if (config == 0) {
    partition.groups = {{0}, {1}, {2}};
  } else if (config == 1) {
    n_modes = 4;
    partition.groups = {{0}, {1, 2}, {3}};
  } else {
    n_modes = 4;
    partition.groups = {{0, 1}, {2}, {3}};
  }
  const CovarianceMatrix cm =
      random_mixed_cm(n_modes, opt.squeeze_cap, opt.temp_cap, rng);
  return {ssa_gap(cm, partition), false};
}

TrialOutcome monogamy_trial(Rng& rng, const CampaignOptions& opt) {
  if (opt.modes != 3 && opt.modes != 4) {
    throw std::invalid_argument("monogamy suite: modes must be 3 or 4");
  }
  const CovarianceMatrix cm = random_pure_cm(opt.modes, opt.squeeze_cap, rng);
  return {monogamy_gap(cm, 0), false};
}

TrialOutcome kw_trial(Rng& rng, const CampaignOptions& opt) {
  const CovarianceMatrix cm = random_pure_cm(3, opt.squeeze_cap, rng);
  double worst = 0.0;
  const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                           {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (const auto& p : perms) {
    worst = std::max(worst, std::abs(kw_gap(cm, p[0], p[1], p[2])));
  }
  return {worst, false};
}

TrialOutcome je_trial(Rng& rng, const CampaignOptions& opt) {
  const CovarianceMatrix cm =
      random_mixed_cm(2, opt.squeeze_cap, opt.temp_cap, rng);
  return {je_gap(cm), false};
}

TrialOutcome knonneg_trial(Rng& rng, const CampaignOptions&) {
  const TwoModeStandardForm sf = random_standard_form(rng);
  try {
    return {k_function(sf.a, sf.b, sf.c_plus, sf.c_minus), false};
  } catch (const std::domain_error&) {
    return {0.0, true};
  }
}

TrialOutcome discord_nonneg_trial(Rng& rng, const CampaignOptions& opt) {
  const CovarianceMatrix cm =
      random_mixed_cm(2, opt.squeeze_cap, opt.temp_cap, rng);
  const double ab = discord(cm, Direction::measure_b).value;
  const double ba = discord(cm, Direction::measure_a).value;
  return {std::min(ab, ba), false};
}

TrialOutcome mc_entropy_trial(Rng& rng, const CampaignOptions& opt) {
  const int n_modes = rng.uniform() < 0.5 ? 1 : 2;
  const CovarianceMatrix cm =
      random_mixed_cm(n_modes, opt.squeeze_cap, opt.temp_cap, rng);
  const double analytic = sampling_entropy(cm);
  const EntropyEstimate est = mc_entropy(cm, opt.mc_samples, rng);
  return {std::abs(est.mean - analytic) / est.std_error, false};
}

TrialOutcome residual_invariance_trial(Rng& rng, const CampaignOptions&) {
  const ThreeModeLocalInvariants inv = random_inseparable_triple(rng);
  const double r0 = residual_e2(inv, 0);
  const double r1 = residual_e2(inv, 1);
  const double r2 = residual_e2(inv, 2);
  const double closed = residual_e2_invariant(inv);
  const double spread = std::max({r0, r1, r2}) - std::min({r0, r1, r2});
  const double agreement = std::max(
      {std::abs(closed - r0), std::abs(closed - r1), std::abs(closed - r2)});
  return {std::max(spread, agreement), false};
}

struct SuiteSpec {
  TrialFn trial;
  Bound bound;
  double default_tol;
};

const SuiteSpec* find_suite(const std::string& name) {
  static const std::map<std::string, SuiteSpec> suites = {
      {"ssa", {ssa_trial, Bound::lower, 1e-9}},
      {"monogamy", {monogamy_trial, Bound::lower, 1e-9}},
      {"kw", {kw_trial, Bound::upper, 1e-6}},
      {"je", {je_trial, Bound::lower, 1e-9}},
      {"knonneg", {knonneg_trial, Bound::lower, 1e-9}},
      {"discord-nonneg", {discord_nonneg_trial, Bound::lower, 1e-9}},
      {"mc-entropy", {mc_entropy_trial, Bound::upper, 3.0}},
      {"residual-invariance",
       {residual_invariance_trial, Bound::upper, 1e-8}},
  };
  const auto it = suites.find(name);
  return it == suites.end() ? nullptr : &it->second;
}

}  // namespace

double default_tolerance(const std::string& suite) {
  const SuiteSpec* spec = find_suite(suite);
  if (spec == nullptr) {
    throw std::invalid_argument("unknown verification suite: " + suite);
  }
  return spec->default_tol;
}

CampaignReport run_campaign(const std::string& suite,
                            const CampaignOptions& options) {
  const SuiteSpec* spec = find_suite(suite);
  if (spec == nullptr) {
    throw std::invalid_argument("unknown verification suite: " + suite);
  }
  if (options.trials < 1) {
    throw std::invalid_argument("campaign needs at least one trial");
  }
  const double tol =
      options.tol >= 0.0 ? options.tol : spec->default_tol;

  CampaignReport report;
  report.suite = suite;
  report.trials = options.trials;

  const auto start = std::chrono::steady_clock::now();
  bool have_worst = false;
  for (long i = 0; i < options.trials; ++i) {
    Rng rng = Rng::trial(options.seed, static_cast<std::uint64_t>(i));
    const TrialOutcome outcome = spec->trial(rng, options);
    if (outcome.excluded) {
      ++report.excluded;
      continue;
    }
    const bool failed = spec->bound == Bound::lower
                            ? outcome.value < -tol
                            : outcome.value > tol;
    if (failed) {
      ++report.failures;
    }
    const bool is_worst =
        !have_worst || (spec->bound == Bound::lower
                            ? outcome.value < report.worst_value
                            : outcome.value > report.worst_value);
    if (is_worst) {
      have_worst = true;
      report.worst_value = outcome.value;
      report.worst_seed =
          Rng::trial_seed(options.seed, static_cast<std::uint64_t>(i));
    }
  }
  const auto stop = std::chrono::steady_clock::now();
  report.elapsed_seconds =
      std::chrono::duration<double>(stop - start).count();
  return report;
}

std::string campaign_to_json(const CampaignReport& report) {
  nlohmann::ordered_json j;
  j["suite"] = report.suite;
  j["trials"] = report.trials;
  j["failures"] = report.failures;
  j["worst_value"] = report.worst_value;
  j["worst_seed"] = report.worst_seed;
  j["elapsed_seconds"] = report.elapsed_seconds;
  return j.dump();
}

TwoModeStandardForm random_standard_form(Rng& rng, double a_cap) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    TwoModeStandardForm sf;
    sf.a = rng.uniform(1.0, a_cap);
    sf.b = rng.uniform(1.0, a_cap);
    const double cap = std::sqrt(sf.a * sf.b) * 0.999;
    sf.c_plus = rng.uniform(0.0, cap);
    sf.c_minus = rng.uniform(-sf.c_plus, sf.c_plus);
    // The margin alone also admits tuples with both symplectic
    // eigenvalues below one; Delta >= 2 picks the physical branch.
    const double delta = sf.a * sf.a + sf.b * sf.b +
                         2.0 * sf.c_plus * sf.c_minus;
    if (sf.uncertainty_margin() >= 0.0 && delta >= 2.0) {
      return sf;
    }
  }
  throw std::runtime_error("random_standard_form: rejection sampling "
                           "exhausted");
}

ThreeModeLocalInvariants random_inseparable_triple(Rng& rng, double a_cap) {
  constexpr double kMargin = 1e-6;
  for (int attempt = 0; attempt < 100000; ++attempt) {
    ThreeModeLocalInvariants inv;
    inv.a1 = rng.uniform(1.0 + kMargin, a_cap);
    inv.a2 = rng.uniform(1.0 + kMargin, a_cap);
    inv.a3 = rng.uniform(1.0 + kMargin, a_cap);
    const std::array<double, 3> a = {inv.a1, inv.a2, inv.a3};
    bool inside = true;
    for (int k = 0; k < 3 && inside; ++k) {
      const double ai = a[static_cast<std::size_t>((k + 1) % 3)];
      const double aj = a[static_cast<std::size_t>((k + 2) % 3)];
      const double ak = a[static_cast<std::size_t>(k)];
      const double lo = std::abs(ai - aj) + 1.0 + kMargin;
      const double hi = std::sqrt(ai * ai + aj * aj - 1.0) - kMargin;
      inside = lo < ak && ak < hi;
    }
    if (inside) {
      return inv;
    }
  }
  throw std::runtime_error("random_inseparable_triple: rejection sampling "
                           "exhausted");
}

}  // namespace gr2
