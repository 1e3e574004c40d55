// Uses nothing but the exported C surface.
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "saff/saff.h"

namespace fs = std::filesystem;

namespace {

std::string data(const char* name) {
  const char* dir = std::getenv("SAFF_DATA_DIR");
  return (fs::path(dir ? dir : "tests/data") / name).string();
}

fs::path scratch(const char* name) {
  auto p = fs::temp_directory_path() / (std::string("saff_capi_") + name);
  fs::remove_all(p);
  return p;
}

struct Loaded {
  saff_config* config = nullptr;
  saff_tuples* tuples = nullptr;
  saff_responses* responses = nullptr;
  Loaded() {
    REQUIRE(saff_config_create(&config) == SAFF_OK);
    REQUIRE(saff_tuples_load(data("tuples_small.csv").c_str(), &tuples) == SAFF_OK);
    REQUIRE(saff_responses_load(data("responses_small.csv").c_str(), tuples, &responses) ==
            SAFF_OK);
  }
  ~Loaded() {
    saff_responses_free(responses);
    saff_tuples_free(tuples);
    saff_config_free(config);
  }
};

void collect(const char* message, void* user) {
  static_cast<std::vector<std::string>*>(user)->push_back(message);
}

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(saff_version()) > 0);
  CHECK(std::string(saff_status_name(SAFF_OK)) == "ok");
  CHECK(std::string(saff_status_name(SAFF_ERR_VALIDATION)) == "validation");
  CHECK(std::string(saff_status_name(SAFF_ERR_IO)) == "io");
  CHECK(std::string(saff_status_name(SAFF_ERR_CONFIG)) == "config");
}

TEST_CASE("configuration handles") {
  saff_config* c = nullptr;
  REQUIRE(saff_config_parse(R"({"sigma": 0.5, "epochs": 3})", &c) == SAFF_OK);
  CHECK(saff_config_set_seed(c, 99) == SAFF_OK);
  CHECK(saff_config_set_attribute(c, "race") == SAFF_OK);
  std::string json = saff_config_to_json(c);
  CHECK(json.find("\"seed\": 99") != std::string::npos);
  CHECK(json.find("\"attribute\": \"race\"") != std::string::npos);
  CHECK(saff_config_set_attribute(c, "height") == SAFF_ERR_INVALID_ARGUMENT);
  CHECK(std::string(saff_last_error()).find("height") != std::string::npos);
  saff_config_free(c);

  saff_config* bad = nullptr;
  CHECK(saff_config_parse(R"({"sigma": -2})", &bad) == SAFF_ERR_CONFIG);
  CHECK(bad == nullptr);
  CHECK(saff_config_parse("{", &bad) == SAFF_ERR_CONFIG);
  CHECK(saff_config_load("/nonexistent.json", &bad) == SAFF_ERR_IO);
  CHECK(saff_config_parse(nullptr, &bad) == SAFF_ERR_INVALID_ARGUMENT);
  saff_config_free(nullptr);
}

TEST_CASE("data handles") {
  Loaded l;
  CHECK(saff_tuples_count(l.tuples) == 3);
  CHECK(saff_tuples_records(l.tuples, 0) == 4);
  CHECK(saff_tuples_records(l.tuples, 9) == 0);
  CHECK(saff_responses_participants(l.responses) == 3);
  CHECK(saff_responses_dropped(l.responses) == 1);
  CHECK(saff_responses_has_question(l.responses, "overall") == 1);
  CHECK(saff_responses_has_question(l.responses, "mood") == 0);

  saff_tuples* t = nullptr;
  CHECK(saff_tuples_load("/nonexistent.csv", &t) == SAFF_ERR_IO);
  CHECK(t == nullptr);
}

TEST_CASE("fairness profile through the C surface") {
  Loaded l;
  double values[SAFF_NUM_NOTIONS];
  int undefined[SAFF_NUM_NOTIONS];
  REQUIRE(saff_fairness_profile(l.tuples, 0, "age", l.config, values, undefined) == SAFF_OK);
  const double want[] = {1, 0, 0, 1, 1, -1};
  for (int i = 0; i < SAFF_NUM_NOTIONS; ++i) CHECK(values[i] == want[i]);
  CHECK(undefined[1] == 1);
  CHECK(undefined[0] == 0);
  CHECK(saff_fairness_profile(l.tuples, 7, "age", l.config, values, undefined) ==
        SAFF_ERR_INVALID_ARGUMENT);
  CHECK(saff_fairness_profile(l.tuples, 0, "all", l.config, values, undefined) != SAFF_OK);
}

TEST_CASE("model primitives") {
  double u[SAFF_NUM_SCORES], w[SAFF_NUM_SCORES], s[SAFF_NUM_SCORES];
  REQUIRE(saff_utility_vector(0.3, 1.0, u) == SAFF_OK);
  REQUIRE(saff_utility_vector(-0.3, 1.0, w) == SAFF_OK);
  double total = 0;
  for (int i = 0; i < SAFF_NUM_SCORES; ++i) {
    total += u[i];
    CHECK(std::abs(u[i] - w[i]) < 1e-12);
  }
  CHECK(std::abs(total - 1) < 1e-9);
  REQUIRE(saff_feedback_distribution(u, 0.0, s) == SAFF_OK);
  for (double p : s) CHECK(std::abs(p - 1.0 / 7) < 1e-15);
  CHECK(saff_utility_vector(0.0, -1.0, u) != SAFF_OK);

  const double v[] = {0.5, 0.5, 0.5, 0, 0, 0};
  double out[6];
  REQUIRE(saff_project_simplex(v, 6, out) == SAFF_OK);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(out[i] - 1.0 / 3) < 1e-15);
  const double three[] = {1.2, -0.2, 0.0};
  REQUIRE(saff_project_simplex(three, 3, out) == SAFF_OK);
  CHECK(out[0] == 1.0);
  CHECK(saff_project_simplex(v, 0, out) != SAFF_OK);
}

TEST_CASE("commands write reports") {
  Loaded l;
  std::vector<std::string> warnings;
  saff_set_warning_handler(collect, &warnings);
  auto dir = scratch("commands");
  CHECK(saff_run_audit(l.tuples, l.config, dir.string().c_str()) == SAFF_OK);
  CHECK(fs::exists(dir / "audit_report.json"));
  CHECK(saff_run_learn(l.tuples, l.responses, "age", l.config, dir.string().c_str()) == SAFF_OK);
  CHECK(fs::exists(dir / "preference_report.json"));
  CHECK(fs::exists(dir / "beta_table.csv"));
  CHECK_FALSE(warnings.empty());
  saff_set_warning_handler(nullptr, nullptr);

  double max_err = -1, mean_err = -1;
  CHECK(saff_run_gradcheck(5, 1, &max_err, &mean_err) == SAFF_OK);
  CHECK(max_err >= 0);
  CHECK(max_err < 1e-5);

  saff_config* small = nullptr;
  REQUIRE(saff_config_parse(R"({"epochs": 3, "attribute": "gender",
      "simulation": {"participant_counts": [4], "tuple_counts": [2], "repetitions": 1,
                     "dataset_participants": 3, "dataset_tuples": 2}})",
                            &small) == SAFF_OK);
  auto sim = scratch("simulate");
  CHECK(saff_run_simulate(small, sim.string().c_str()) == SAFF_OK);
  CHECK(fs::exists(sim / "regret_curves_gender.csv"));
  saff_config_free(small);

  CHECK(saff_run_audit(nullptr, l.config, dir.string().c_str()) == SAFF_ERR_INVALID_ARGUMENT);
  CHECK(saff_run_learn(l.tuples, l.responses, "shoe", l.config, dir.string().c_str()) ==
        SAFF_ERR_INVALID_ARGUMENT);
}
