// gr2 — covariance-matrix toolkit for Renyi-2 Gaussian information
// measures. Subcommands: validate, measure, tripartite, random, verify,
// sweep. Exit codes: 0 success, 1 unphysical input, 2 usage/parse error,
// 3 verification failure.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gr2/correlations.hpp"
#include "gr2/covariance.hpp"
#include "gr2/entanglement.hpp"
#include "gr2/io.hpp"
#include "gr2/phase_space.hpp"
#include "gr2/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnphysical = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerifyFailed = 3;

std::string format_value(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  return buffer;
}

// Partition spec: groups separated by ';', mode indices by ','.
// Example: "0,1;2" puts modes 0 and 1 in the first group.
gr2::ModePartition parse_partition(const std::string& spec) {
  gr2::ModePartition partition;
  std::stringstream groups(spec);
  std::string group;
  while (std::getline(groups, group, ';')) {
    std::vector<int> modes;
    std::stringstream items(group);
    std::string item;
    while (std::getline(items, item, ',')) {
      std::size_t used = 0;
      const int mode = std::stoi(item, &used);
      if (used != item.size() || mode < 0) {
        throw std::invalid_argument("bad partition spec: '" + spec + "'");
      }
      modes.push_back(mode);
    }
    partition.groups.push_back(std::move(modes));
  }
  if (partition.groups.empty()) {
    throw std::invalid_argument("bad partition spec: '" + spec + "'");
  }
  return partition;
}

struct LoadedState {
  gr2::CmDocument doc;
  std::optional<gr2::CovarianceMatrix> cm;  // set when physical
  gr2::ValidityReport report;
};

LoadedState load_state(const std::string& path) {
  LoadedState state;
  state.doc = gr2::read_cm_document_file(path);
  state.report = gr2::validate(state.doc.matrix);
  if (state.report.symmetric && state.report.positive_definite &&
      state.report.physical) {
    state.cm.emplace(state.doc.matrix);
  }
  return state;
}

int cmd_validate(const std::string& path) {
  const LoadedState state = load_state(path);
  std::printf("symmetric: %s\n", state.report.symmetric ? "true" : "false");
  std::printf("positive_definite: %s\n",
              state.report.positive_definite ? "true" : "false");
  std::printf("physical: %s\n", state.report.physical ? "true" : "false");
  std::printf("nu_min: %s\n", format_value(state.report.nu_min).c_str());
  return state.report.physical ? kExitOk : kExitUnphysical;
}

void print_witness(const gr2::MeasureReport& report) {
  const char* method = report.method == gr2::SolveMethod::closed_form
                           ? "closed_form"
                           : "numeric";
  if (!std::isnan(report.theta)) {
    std::printf("witness: theta=%s method=%s\n",
                format_value(report.theta).c_str(), method);
  } else if (!std::isnan(report.lambda)) {
    std::printf("witness: lambda=%s phi=%s method=%s\n",
                format_value(report.lambda).c_str(),
                format_value(report.phi).c_str(), method);
  } else if (report.method == gr2::SolveMethod::numeric) {
    std::printf("witness: method=numeric iterations=%d\n",
                report.iterations);
  }
}

int cmd_measure(const std::string& path, const std::string& measure,
                const std::string& partition_spec,
                const std::string& direction_name) {
  const LoadedState state = load_state(path);
  if (!state.cm) {
    std::fprintf(stderr, "error: input state is not physical\n");
    return kExitUnphysical;
  }
  const gr2::CovarianceMatrix& cm = *state.cm;
  const gr2::Direction direction = direction_name == "ba"
                                       ? gr2::Direction::measure_a
                                       : gr2::Direction::measure_b;
  std::optional<gr2::ModePartition> partition;
  if (!partition_spec.empty()) {
    partition = parse_partition(partition_spec);
  }

  if (measure == "renyi2" || measure == "vn") {
    gr2::CovarianceMatrix target = cm;
    if (partition) {
      if (partition->groups.size() != 1) {
        throw std::invalid_argument(
            "entropy measures take a single-group partition");
      }
      target = gr2::reduce(cm, partition->groups[0]);
    }
    const double value = measure == "renyi2"
                             ? gr2::renyi2_entropy(target)
                             : gr2::von_neumann_entropy(target);
    std::printf("%s\n", format_value(value).c_str());
    return kExitOk;
  }
  if (measure == "mutual") {
    if (!partition) {
      throw std::invalid_argument("mutual needs --partition \"A;B\"");
    }
    std::printf(
        "%s\n",
        format_value(gr2::mutual_information(cm, *partition)).c_str());
    return kExitOk;
  }
  if (measure == "ssa") {
    if (!partition) {
      throw std::invalid_argument("ssa needs --partition \"A;B;C\"");
    }
    std::printf("%s\n", format_value(gr2::ssa_gap(cm, *partition)).c_str());
    return kExitOk;
  }
  if (measure == "classical" || measure == "discord") {
    gr2::MeasureReport report;
    if (partition && partition->groups.size() == 2 &&
        measure == "classical") {
      const auto& measured = direction == gr2::Direction::measure_b
                                 ? partition->groups[1]
                                 : partition->groups[0];
      report = gr2::classical_correlations_numeric(cm, measured);
    } else {
      report = measure == "classical"
                   ? gr2::classical_correlations(cm, direction)
                   : gr2::discord(cm, direction);
    }
    std::printf("%s\n", format_value(report.value).c_str());
    print_witness(report);
    return kExitOk;
  }
  if (measure == "entanglement") {
    if (cm.modes() == 2 && (!partition || partition->groups.size() != 2)) {
      const gr2::MeasureReport report = gr2::e2_two_mode(cm);
      std::printf("%s\n", format_value(report.value).c_str());
      print_witness(report);
      return kExitOk;
    }
    if (!partition || partition->groups.size() != 2) {
      throw std::invalid_argument(
          "entanglement needs --partition \"A;B\" for more than two modes");
    }
    std::printf(
        "%s\n",
        format_value(gr2::e2_pure_bipartition(cm, *partition)).c_str());
    return kExitOk;
  }
  throw std::invalid_argument("unknown measure: " + measure);
}

int cmd_tripartite(double a1, double a2, double a3, int focus) {
  const gr2::ThreeModeLocalInvariants inv{a1, a2, a3};
  if (!inv.triangle_ok()) {
    std::fprintf(stderr,
                 "error: (a1, a2, a3) violate the triangle condition\n");
    return kExitUsage;
  }
  const gr2::InseparabilityClass cls = gr2::classify_inseparability(inv);
  std::printf("%-6s %-15s %-15s %-15s %-15s %-15s\n", "focus", "E2(i:jk)",
              "E2(i:j)", "E2(i:k)", "residual", "residual_d2");
  for (int i = 0; i < 3; ++i) {
    if (focus >= 0 && focus != i) continue;
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    std::printf("%-6d %-15.9f %-15.9f %-15.9f %-15.9f %-15.9f\n", i,
                std::log(inv.value(i)),
                0.5 * std::log(gr2::g_reduced(inv, i, j)),
                0.5 * std::log(gr2::g_reduced(inv, i, k)),
                gr2::residual_e2(inv, i), gr2::residual_d2(inv, i));
  }
  std::printf("fully_inseparable: %s\n",
              cls.fully_inseparable ? "true" : "false");
  if (cls.fully_inseparable) {
    std::printf("residual_invariant: %s\n",
                format_value(gr2::residual_e2_invariant(inv)).c_str());
  }
  return kExitOk;
}

int cmd_random(int modes, bool pure, double squeeze_cap, double temp_cap,
               std::uint64_t seed, const std::string& out,
               const std::string& label) {
  gr2::Rng rng(seed);
  const gr2::CovarianceMatrix cm =
      pure ? gr2::random_pure_cm(modes, squeeze_cap, rng)
           : gr2::random_mixed_cm(modes, squeeze_cap, temp_cap, rng);
  gr2::CmDocument doc;
  doc.modes = modes;
  doc.matrix = cm.matrix();
  doc.label = label;
  if (out.empty() || out == "-") {
    gr2::write_cm_document(std::cout, doc);
  } else {
    gr2::write_cm_document_file(out, doc);
  }
  return kExitOk;
}

int cmd_verify(const std::string& suite, long trials, std::uint64_t seed,
               double tol, int modes, double squeeze_cap, double temp_cap,
               long mc_samples) {
  gr2::CampaignOptions options;
  options.trials = trials;
  options.seed = seed;
  options.tol = tol;
  options.modes = modes;
  options.squeeze_cap = squeeze_cap;
  options.temp_cap = temp_cap;
  options.mc_samples = mc_samples;
  const gr2::CampaignReport report = gr2::run_campaign(suite, options);
  if (report.excluded > 0) {
    std::fprintf(stderr, "note: %ld trials excluded as domain failures\n",
                 report.excluded);
  }
  std::printf("%s\n", gr2::campaign_to_json(report).c_str());
  return report.failures > 0 ? kExitVerifyFailed : kExitOk;
}

int cmd_sweep(const std::string& family, const std::string& range_spec,
              const std::string& measures_spec, const std::string& out,
              double nu) {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
  if (std::sscanf(range_spec.c_str(), "%lf:%lf:%lf", &start, &stop,
                  &step) != 3 ||
      step <= 0.0 || stop < start) {
    throw std::invalid_argument(
        "bad --param-range, expected start:stop:step");
  }
  std::vector<std::string> measures;
  {
    std::stringstream items(measures_spec);
    std::string item;
    while (std::getline(items, item, ',')) {
      if (!item.empty()) measures.push_back(item);
    }
  }
  if (measures.empty()) {
    throw std::invalid_argument("no measures requested");
  }

  const bool triple_family = family == "ghz";
  std::function<gr2::CovarianceMatrix(double)> make_state;
  if (family == "tmss") {
    make_state = [](double r) { return gr2::tmss_cm(r); };
  } else if (family == "squeezed-thermal") {
    make_state = [nu](double r) {
      return gr2::CovarianceMatrix(nu * gr2::tmss_cm(r).matrix());
    };
  } else if (!triple_family) {
    throw std::invalid_argument("unknown family: " + family);
  }

  const auto evaluate = [&](const std::string& name,
                            double param) -> double {
    if (triple_family) {
      const gr2::ThreeModeLocalInvariants inv{param, param, param};
      if (name == "residual") return gr2::residual_e2(inv, 0);
      if (name == "residual_invariant")
        return gr2::residual_e2_invariant(inv);
      if (name == "residual_d2") return gr2::residual_d2(inv, 0);
      if (name == "e2_pair")
        return 0.5 * std::log(gr2::g_reduced(inv, 0, 1));
      if (name == "e2_bipartition") return std::log(param);
      if (name == "window")
        return gr2::classify_inseparability(inv).fully_inseparable ? 1.0
                                                                   : 0.0;
      throw std::invalid_argument("unknown measure for ghz: " + name);
    }
    const gr2::CovarianceMatrix cm = make_state(param);
    if (name == "renyi2") return gr2::renyi2_entropy(cm);
    if (name == "renyi2_A")
      return gr2::renyi2_entropy(gr2::reduce(cm, {0}));
    if (name == "vn") return gr2::von_neumann_entropy(cm);
    if (name == "vn_A")
      return gr2::von_neumann_entropy(gr2::reduce(cm, {0}));
    if (name == "purity") return gr2::purity(cm);
    if (name == "mutual")
      return gr2::mutual_information(cm, gr2::ModePartition{{{0}, {1}}});
    if (name == "classical")
      return gr2::classical_correlations(cm, gr2::Direction::measure_b)
          .value;
    if (name == "discord")
      return gr2::discord(cm, gr2::Direction::measure_b).value;
    if (name == "entanglement") return gr2::e2_two_mode(cm).value;
    throw std::invalid_argument("unknown measure: " + name);
  };

  std::ostringstream csv;
  csv << "param";
  for (const auto& name : measures) csv << "," << name;
  csv << "\n";
  for (double param = start; param <= stop + 1e-12; param += step) {
    csv << format_value(param);
    for (const auto& name : measures) {
      csv << "," << format_value(evaluate(name, param));
    }
    csv << "\n";
  }

  if (out.empty() || out == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream file(out, std::ios::binary);
    if (!file) {
      throw std::runtime_error("cannot open '" + out + "' for writing");
    }
    file << csv.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Renyi-2 information and correlation measures for Gaussian "
               "states given by covariance matrices"};
  app.require_subcommand(1);

  std::string validate_path;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check a covariance-matrix document");
  validate_cmd->add_option("path", validate_path, "CM document (JSON)")
      ->required();

  std::string measure_path;
  std::string measure_name;
  std::string measure_partition;
  std::string measure_direction = "ab";
  CLI::App* measure_cmd =
      app.add_subcommand("measure", "Compute a measure on a state");
  measure_cmd->add_option("path", measure_path, "CM document (JSON)")
      ->required();
  measure_cmd
      ->add_option("--measure", measure_name,
                   "renyi2|vn|mutual|ssa|classical|discord|entanglement")
      ->required();
  measure_cmd->add_option("--partition", measure_partition,
                          "mode groups, e.g. \"0;1\" or \"0,1;2\"");
  measure_cmd
      ->add_option("--direction", measure_direction,
                   "ab measures on B (the last mode), ba on A (the first)")
      ->check(CLI::IsMember({"ab", "ba"}));

  double a1 = 1.0;
  double a2 = 1.0;
  double a3 = 1.0;
  int focus = -1;
  CLI::App* tripartite_cmd = app.add_subcommand(
      "tripartite", "Entanglement sharing of a pure three-mode state");
  tripartite_cmd->add_option("--a1", a1, "first marginal invariant")
      ->required();
  tripartite_cmd->add_option("--a2", a2, "second marginal invariant")
      ->required();
  tripartite_cmd->add_option("--a3", a3, "third marginal invariant")
      ->required();
  tripartite_cmd->add_option("--focus", focus, "restrict to one focus mode");

  int random_modes = 1;
  bool random_pure = false;
  double random_squeeze = 1.5;
  double random_temp = 5.0;
  std::uint64_t random_seed = 0;
  std::string random_out;
  std::string random_label;
  CLI::App* random_cmd =
      app.add_subcommand("random", "Generate a random state document");
  random_cmd->add_option("--modes", random_modes, "number of modes")
      ->required()
      ->check(CLI::PositiveNumber);
  random_cmd->add_flag("--pure", random_pure, "draw a pure state");
  random_cmd->add_option("--squeeze-cap", random_squeeze,
                         "per-mode squeezing cap");
  random_cmd->add_option("--temp-cap", random_temp,
                         "thermal eigenvalue cap (mixed states)");
  random_cmd->add_option("--seed", random_seed, "RNG seed");
  random_cmd->add_option("--out", random_out, "output path ('-' = stdout)");
  random_cmd->add_option("--label", random_label, "optional label field");

  std::string verify_suite;
  long verify_trials = 1000;
  std::uint64_t verify_seed = 0;
  double verify_tol = -1.0;
  int verify_modes = 3;
  double verify_squeeze = 1.5;
  double verify_temp = 5.0;
  long verify_mc_samples = 100000;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "Run a seeded randomized verification campaign");
  verify_cmd
      ->add_option("--suite", verify_suite,
                   "ssa|monogamy|kw|je|knonneg|discord-nonneg|mc-entropy|"
                   "residual-invariance")
      ->required();
  verify_cmd->add_option("--trials", verify_trials, "number of trials")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", verify_seed, "campaign seed");
  verify_cmd->add_option("--tol", verify_tol,
                         "tolerance (default: per suite)");
  verify_cmd->add_option("--modes", verify_modes,
                         "monogamy suite: 3 or 4 modes");
  verify_cmd->add_option("--squeeze-cap", verify_squeeze,
                         "random-state squeezing cap");
  verify_cmd->add_option("--temp-cap", verify_temp,
                         "random-state thermal cap");
  verify_cmd->add_option("--mc-samples", verify_mc_samples,
                         "samples per mc-entropy trial");

  std::string sweep_family;
  std::string sweep_range;
  std::string sweep_measures;
  std::string sweep_out;
  double sweep_nu = 1.5;
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "Tabulate measures over a state family");
  sweep_cmd->add_option("--family", sweep_family,
                        "tmss|ghz|squeezed-thermal")
      ->required();
  sweep_cmd->add_option("--param-range", sweep_range, "start:stop:step")
      ->required();
  sweep_cmd
      ->add_option("--measures", sweep_measures, "comma-separated list")
      ->required();
  sweep_cmd->add_option("--out", sweep_out, "CSV path ('-' = stdout)");
  sweep_cmd->add_option("--nu", sweep_nu,
                        "thermal factor for squeezed-thermal");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help and friends
    }
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(validate_cmd)) {
      return cmd_validate(validate_path);
    }
    if (app.got_subcommand(measure_cmd)) {
      return cmd_measure(measure_path, measure_name, measure_partition,
                         measure_direction);
    }
    if (app.got_subcommand(tripartite_cmd)) {
      return cmd_tripartite(a1, a2, a3, focus);
    }
    if (app.got_subcommand(random_cmd)) {
      return cmd_random(random_modes, random_pure, random_squeeze,
                        random_temp, random_seed, random_out, random_label);
    }
    if (app.got_subcommand(verify_cmd)) {
      return cmd_verify(verify_suite, verify_trials, verify_seed, verify_tol,
                        verify_modes, verify_squeeze, verify_temp,
                        verify_mc_samples);
    }
    if (app.got_subcommand(sweep_cmd)) {
      return cmd_sweep(sweep_family, sweep_range, sweep_measures, sweep_out,
                       sweep_nu);
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUnphysical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
