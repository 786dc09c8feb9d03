#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gr2/io.hpp"
#include "gr2/verify.hpp"

using namespace gr2;

TEST_CASE("campaign determinism and worst-seed replay") {
  CampaignOptions options;
  options.trials = 400;
  options.seed = 17;

  const CampaignReport first = run_campaign("ssa", options);
  const CampaignReport second = run_campaign("ssa", options);
  CHECK(first.worst_value == second.worst_value);
  CHECK(first.worst_seed == second.worst_seed);
  CHECK(first.failures == second.failures);

  // Replaying the worst seed as a one-trial campaign reproduces the value.
  CampaignOptions replay;
  replay.trials = 1;
  replay.seed = first.worst_seed;
  const CampaignReport repeated = run_campaign("ssa", replay);
  CHECK(repeated.worst_value == first.worst_value);
}

TEST_CASE("campaign suites run clean at small scale") {
  for (const char* suite : {"ssa", "je", "discord-nonneg", "knonneg",
                            "residual-invariance", "kw"}) {
    CampaignOptions options;
    options.trials = 60;
    options.seed = 3;
    const CampaignReport report = run_campaign(suite, options);
    INFO(suite);
    CHECK(report.failures == 0);
    CHECK(report.trials == 60);
  }

  CampaignOptions mono;
  mono.trials = 60;
  mono.seed = 3;
  mono.modes = 4;
  CHECK(run_campaign("monogamy", mono).failures == 0);

  CampaignOptions mc;
  mc.trials = 5;
  mc.seed = 3;
  mc.mc_samples = 20000;
  CHECK(run_campaign("mc-entropy", mc).failures == 0);

  CHECK_THROWS_AS(run_campaign("unknown", mono), std::invalid_argument);
}

TEST_CASE("campaign json line") {
  CampaignReport report;
  report.suite = "ssa";
  report.trials = 10;
  report.failures = 0;
  report.worst_value = 0.25;
  report.worst_seed = 7;
  report.elapsed_seconds = 0.5;
  const std::string line = campaign_to_json(report);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(line.find("\"suite\":\"ssa\"") != std::string::npos);
  CHECK(line.find("\"failures\":0") != std::string::npos);
  CHECK(line.find("\"worst_seed\":7") != std::string::npos);
}

TEST_CASE("document round trip") {
  Rng rng(5);
  CmDocument doc;
  doc.modes = 2;
  doc.matrix = random_mixed_cm(2, 1.0, 3.0, rng).matrix();
  doc.label = "fixture";

  std::stringstream stream;
  write_cm_document(stream, doc);
  const CmDocument back = read_cm_document(stream);
  CHECK(back.modes == 2);
  CHECK(back.ordering == "q1p1");
  CHECK(back.label == "fixture");
  CHECK((back.matrix - doc.matrix).cwiseAbs().maxCoeff() == 0.0);

  // Identical documents serialize byte-identically.
  std::stringstream again;
  write_cm_document(again, doc);
  std::stringstream reference;
  write_cm_document(reference, doc);
  CHECK(again.str() == reference.str());
}

TEST_CASE("document validation errors") {
  const auto reject = [](const std::string& text) {
    std::stringstream stream(text);
    CHECK_THROWS_AS(read_cm_document(stream), std::runtime_error);
  };
  reject("not json");
  reject("{\"modes\": 1}");
  reject("{\"modes\": 1, \"ordering\": \"qqpp\", \"matrix\": "
         "[[1,0],[0,1]]}");
  reject("{\"modes\": 1, \"ordering\": \"q1p1\", \"matrix\": [[1,0]]}");
  reject("{\"modes\": 1, \"ordering\": \"q1p1\", \"matrix\": "
         "[[1,\"x\"],[0,1]]}");
  reject("{\"modes\": 0, \"ordering\": \"q1p1\", \"matrix\": []}");
}

TEST_CASE("pinned rng streams") {
  // The scalar conversions are part of the file-format contract: fixed
  // seed, fixed stream.
  Rng a(123);
  Rng b(123);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.uniform() == b.uniform());
  }
  Rng c(123);
  Rng d(124);
  int differences = 0;
  for (int i = 0; i < 100; ++i) {
    differences += c.raw() != d.raw() ? 1 : 0;
  }
  CHECK(differences > 90);

  // Trial streams: index 0 replays the master seed.
  Rng master(55);
  Rng trial0 = Rng::trial(55, 0);
  CHECK(master.raw() == trial0.raw());
  const std::uint64_t replay_seed = Rng::trial_seed(55, 7);
  Rng via_trial = Rng::trial(55, 7);
  Rng via_replay = Rng::trial(replay_seed, 0);
  CHECK(via_trial.raw() == via_replay.raw());
}

TEST_CASE("standard form tuple sampler is physical") {
  Rng rng(6);
  for (int i = 0; i < 2000; ++i) {
    const TwoModeStandardForm sf = random_standard_form(rng);
    CHECK(sf.a >= 1.0);
    CHECK(sf.b >= 1.0);
    CHECK(sf.c_plus >= std::abs(sf.c_minus));
    CHECK(validate(standard_form_cm(sf).matrix()).physical);
  }
}

TEST_CASE("inseparable triple sampler stays in the window") {
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    const ThreeModeLocalInvariants inv = random_inseparable_triple(rng);
    CHECK(inv.triangle_ok());
    CHECK(classify_inseparability(inv).fully_inseparable);
  }
}
