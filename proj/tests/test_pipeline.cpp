#include <doctest.h>

#include "fixtures.hpp"
#include "saff/error.hpp"
#include "saff/pipeline.hpp"

using namespace saff;
namespace fs = std::filesystem;

namespace {

RunConfig small_config() {
  RunConfig c;
  c.seed = 17;
  c.epochs = 5;
  c.simulation.participant_counts = {5, 10};
  c.simulation.tuple_counts = {3};
  c.simulation.repetitions = 2;
  c.simulation.dataset_participants = 8;
  c.simulation.dataset_tuples = 4;
  return c;
}

}  // namespace

TEST_CASE("audit writes its report and forwards warnings") {
  auto tuples = load_tuples(fixture::data_dir() / "tuples_small.csv");
  auto dir = fixture::scratch_dir("audit");
  std::vector<std::string> seen;
  auto cfg = small_config();
  auto report = run_audit(tuples, cfg, dir / "out", [&](const std::string& w) { seen.push_back(w); });
  CHECK(fs::exists(dir / "out" / output_files::audit_report));
  CHECK(report.warnings == seen);
  CHECK(report.attributes.size() == 3);

  // A tuple with every recipient under 50 triggers the single-group warning.
  auto young = tuples;
  for (auto& r : young[1].records) r.recipient_age = 30;
  seen.clear();
  run_audit(young, cfg, dir / "out2", [&](const std::string& w) { seen.push_back(w); });
  REQUIRE_FALSE(seen.empty());
  CHECK(seen[0].find("T2") != std::string::npos);
}

TEST_CASE("learn writes three files") {
  auto tuples = load_tuples(fixture::data_dir() / "tuples_small.csv");
  auto bundle = load_responses(fixture::data_dir() / "responses_small.csv", tuples);
  auto dir = fixture::scratch_dir("learn");
  auto cfg = small_config();
  std::vector<std::string> seen;
  auto report = run_learn(tuples, bundle, {Attribute::gender}, cfg, dir,
                          [&](const std::string& w) { seen.push_back(w); });
  REQUIRE(report.attributes.size() == 1);
  CHECK(report.attributes[0].attribute == Attribute::gender);
  CHECK(report.dropped_participants == std::vector<std::string>{"P4"});
  CHECK_FALSE(seen.empty());
  for (const char* f : {output_files::preference_report, output_files::regret_trajectory,
                        output_files::beta_table})
    CHECK(fs::exists(dir / f));
  auto json = fixture::slurp(dir / output_files::preference_report);
  CHECK(json.find("\"attribute\": \"gender\"") != std::string::npos);
  CHECK(json.find("\"preferred_notion\"") != std::string::npos);

  // Missing question.
  ResponseBundle partial = bundle;
  partial.sets.erase(Question::race);
  CHECK_THROWS_AS(run_learn(tuples, partial, {Attribute::race}, cfg, dir), Error);
}

TEST_CASE("synthetic dataset is deterministic and well-formed") {
  auto cfg = small_config();
  auto a = make_synthetic_dataset(cfg);
  auto b = make_synthetic_dataset(cfg);
  REQUIRE(a.responses.size() == 4);
  CHECK(a.responses[0].question() == Question::overall);
  CHECK(a.tuples.size() == 4);
  CHECK(a.population.members.size() == 8);
  for (std::size_t i = 0; i < 4; ++i)
    CHECK(std::equal(a.responses[i].scores().begin(), a.responses[i].scores().end(),
                     b.responses[i].scores().begin()));
}

TEST_CASE("simulate writes data and per-attribute reports") {
  auto cfg = small_config();
  cfg.attributes = {Attribute::age, Attribute::race};
  auto dir = fixture::scratch_dir("simulate");
  auto results = run_simulate(cfg, dir);
  CHECK(results.size() == 2);
  CHECK(results[0].cells.size() == 2);
  for (const char* f : {"tuples.csv", "responses.csv", "regret_curves_age.csv",
                        "simulation_report_age.json", "regret_curves_race.csv",
                        "simulation_report_race.json"})
    CHECK(fs::exists(dir / f));
  CHECK_FALSE(fs::exists(dir / "regret_curves_gender.csv"));

  // The written dataset loads back and learns.
  auto tuples = load_tuples(dir / "tuples.csv");
  auto bundle = load_responses(dir / "responses.csv", tuples);
  CHECK(bundle.sets.size() == 4);
  CHECK(bundle.participant_ids.size() == 8);

  auto dir2 = fixture::scratch_dir("simulate2");
  run_simulate(cfg, dir2);
  for (const char* f : {"tuples.csv", "responses.csv", "regret_curves_age.csv",
                        "simulation_report_race.json"})
    CHECK(fixture::slurp(dir / f) == fixture::slurp(dir2 / f));
}

TEST_CASE("gradcheck") {
  auto r = run_gradcheck(20, 3);
  CHECK(r.instances == 20);
  CHECK(r.max_relative_error < 1e-5);
  CHECK(r.mean_relative_error <= r.max_relative_error);
  CHECK_THROWS_AS(run_gradcheck(0, 1), Error);

  // All-constant profiles: both derivatives vanish and count as agreement.
  std::vector<FairnessProfile> flat(2);
  ResponseSet resp(Question::age, 2, 2, {1, 7, 4, 4});
  CHECK(gradient_relative_error(resp, flat, PreferenceWeight::uniform().weights(), {}) == 0.0);
}

TEST_CASE("unwritable output directory is an io error") {
  auto tuples = load_tuples(fixture::data_dir() / "tuples_small.csv");
  auto dir = fixture::scratch_dir("blocked");
  fixture::spit(dir / "file", "x");
  try {
    run_audit(tuples, small_config(), dir / "file" / "sub");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::io);
  }
}
