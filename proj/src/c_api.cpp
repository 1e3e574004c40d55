#include "saff/saff.h"

#include <algorithm>
#include <cstring>
#include <mutex>
#include <new>
#include <string>

#include "saff/error.hpp"
#include "saff/pipeline.hpp"

struct saff_config {
  saff::RunConfig config;
  std::string json;
};

struct saff_tuples {
  std::vector<saff::DataTuple> tuples;
};

struct saff_responses {
  saff::ResponseBundle bundle;
};

namespace {

thread_local std::string last_error;

std::mutex warning_mutex;
saff_warning_fn warning_fn = nullptr;
void* warning_user = nullptr;

void forward_warning(const std::string& message) {
  std::lock_guard lock(warning_mutex);
  if (warning_fn) warning_fn(message.c_str(), warning_user);
}

saff_status to_status(saff::ErrorCategory category) {
  return static_cast<saff_status>(static_cast<int>(category));
}

saff_status set_error(saff_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
saff_status guarded(Body&& body) {
  try {
    body();
    return SAFF_OK;
  } catch (const saff::Error& e) {
    return set_error(to_status(e.category()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(SAFF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(SAFF_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(SAFF_ERR_INTERNAL, "unknown failure");
  }
}

saff_status null_argument(const char* name) {
  return set_error(SAFF_ERR_INVALID_ARGUMENT, std::string(name) + " must not be NULL");
}

#define SAFF_REQUIRE(arg) \
  if ((arg) == nullptr) return null_argument(#arg)

}  // namespace

extern "C" {

const char* saff_version(void) { return "1.0.0"; }

const char* saff_status_name(saff_status status) {
  switch (status) {
    case SAFF_OK: return "ok";
    case SAFF_ERR_VALIDATION: return "validation";
    case SAFF_ERR_IO: return "io";
    case SAFF_ERR_CONFIG: return "config";
    case SAFF_ERR_DIMENSION: return "dimension";
    case SAFF_ERR_NUMERIC: return "numeric";
    case SAFF_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case SAFF_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* saff_last_error(void) { return last_error.c_str(); }

void saff_set_warning_handler(saff_warning_fn fn, void* user_data) {
  std::lock_guard lock(warning_mutex);
  warning_fn = fn;
  warning_user = user_data;
}

saff_status saff_config_create(saff_config** out) {
  SAFF_REQUIRE(out);
  return guarded([&] { *out = new saff_config{}; });
}

saff_status saff_config_load(const char* path, saff_config** out) {
  SAFF_REQUIRE(path);
  SAFF_REQUIRE(out);
  return guarded([&] { *out = new saff_config{saff::load_config(path), {}}; });
}

saff_status saff_config_parse(const char* json_text, saff_config** out) {
  SAFF_REQUIRE(json_text);
  SAFF_REQUIRE(out);
  return guarded([&] { *out = new saff_config{saff::parse_config(json_text), {}}; });
}

saff_status saff_config_set_seed(saff_config* config, uint64_t seed) {
  SAFF_REQUIRE(config);
  config->config.seed = seed;
  return SAFF_OK;
}

saff_status saff_config_set_attribute(saff_config* config, const char* attribute) {
  SAFF_REQUIRE(config);
  SAFF_REQUIRE(attribute);
  return guarded([&] { config->config.attributes = saff::parse_attribute_selection(attribute); });
}

const char* saff_config_to_json(saff_config* config) {
  if (config == nullptr) return nullptr;
  config->json = saff::config_to_json(config->config);
  return config->json.c_str();
}

void saff_config_free(saff_config* config) { delete config; }

saff_status saff_tuples_load(const char* path, saff_tuples** out) {
  SAFF_REQUIRE(path);
  SAFF_REQUIRE(out);
  return guarded([&] { *out = new saff_tuples{saff::load_tuples(path)}; });
}

size_t saff_tuples_count(const saff_tuples* tuples) {
  return tuples ? tuples->tuples.size() : 0;
}

size_t saff_tuples_records(const saff_tuples* tuples, size_t index) {
  if (!tuples || index >= tuples->tuples.size()) return 0;
  return tuples->tuples[index].records.size();
}

void saff_tuples_free(saff_tuples* tuples) { delete tuples; }

saff_status saff_responses_load(const char* path, const saff_tuples* tuples,
                                saff_responses** out) {
  SAFF_REQUIRE(path);
  SAFF_REQUIRE(tuples);
  SAFF_REQUIRE(out);
  return guarded([&] {
    auto bundle = saff::load_responses(path, tuples->tuples);
    for (const auto& w : bundle.warnings) forward_warning(w);
    *out = new saff_responses{std::move(bundle)};
  });
}

size_t saff_responses_participants(const saff_responses* responses) {
  return responses ? responses->bundle.participant_ids.size() : 0;
}

size_t saff_responses_dropped(const saff_responses* responses) {
  return responses ? responses->bundle.dropped_participants.size() : 0;
}

int saff_responses_has_question(const saff_responses* responses, const char* question) {
  if (!responses || !question) return 0;
  const auto q = saff::parse_question(question);
  return q && responses->bundle.sets.contains(*q) ? 1 : 0;
}

void saff_responses_free(saff_responses* responses) { delete responses; }

saff_status saff_run_audit(const saff_tuples* tuples, const saff_config* config,
                           const char* out_dir) {
  SAFF_REQUIRE(tuples);
  SAFF_REQUIRE(config);
  SAFF_REQUIRE(out_dir);
  return guarded([&] { saff::run_audit(tuples->tuples, config->config, out_dir, forward_warning); });
}

saff_status saff_run_learn(const saff_tuples* tuples, const saff_responses* responses,
                           const char* attribute, const saff_config* config,
                           const char* out_dir) {
  SAFF_REQUIRE(tuples);
  SAFF_REQUIRE(responses);
  SAFF_REQUIRE(config);
  SAFF_REQUIRE(out_dir);
  return guarded([&] {
    const auto attributes = attribute ? saff::parse_attribute_selection(attribute)
                                      : config->config.attributes;
    saff::run_learn(tuples->tuples, responses->bundle, attributes, config->config, out_dir,
                    forward_warning);
  });
}

saff_status saff_run_simulate(const saff_config* config, const char* out_dir) {
  SAFF_REQUIRE(config);
  SAFF_REQUIRE(out_dir);
  return guarded([&] { saff::run_simulate(config->config, out_dir); });
}

saff_status saff_run_gradcheck(size_t instances, uint64_t seed, double* max_relative_error,
                               double* mean_relative_error) {
  SAFF_REQUIRE(max_relative_error);
  return guarded([&] {
    const auto result = saff::run_gradcheck(instances, seed);
    *max_relative_error = result.max_relative_error;
    if (mean_relative_error) *mean_relative_error = result.mean_relative_error;
  });
}

saff_status saff_fairness_profile(const saff_tuples* tuples, size_t index,
                                  const char* attribute, const saff_config* config,
                                  double values[SAFF_NUM_NOTIONS],
                                  int undefined[SAFF_NUM_NOTIONS]) {
  SAFF_REQUIRE(tuples);
  SAFF_REQUIRE(attribute);
  SAFF_REQUIRE(config);
  SAFF_REQUIRE(values);
  return guarded([&] {
    if (index >= tuples->tuples.size())
      saff::fail(saff::ErrorCategory::invalid_argument, "tuple index out of range");
    const auto a = saff::parse_attribute(attribute);
    if (!a)
      saff::fail(saff::ErrorCategory::invalid_argument,
                 std::string("unknown attribute '") + attribute + "'");
    const auto profile =
        saff::fairness_profile(tuples->tuples[index], config->config.group(*a));
    std::copy(profile.values.begin(), profile.values.end(), values);
    if (undefined)
      for (std::size_t l = 0; l < saff::kNumNotions; ++l) undefined[l] = profile.undefined[l];
  });
}

saff_status saff_utility_vector(double psi, double sigma, double utilities[SAFF_NUM_SCORES]) {
  SAFF_REQUIRE(utilities);
  return guarded([&] {
    if (!(sigma > 0.0)) saff::fail(saff::ErrorCategory::invalid_argument, "sigma must be positive");
    const auto u = saff::utility_vector(psi, sigma);
    std::copy(u.values.begin(), u.values.end(), utilities);
  });
}

saff_status saff_feedback_distribution(const double utilities[SAFF_NUM_SCORES], double lambda,
                                       double probabilities[SAFF_NUM_SCORES]) {
  SAFF_REQUIRE(utilities);
  SAFF_REQUIRE(probabilities);
  return guarded([&] {
    saff::UtilityVector u;
    std::copy(utilities, utilities + SAFF_NUM_SCORES, u.values.begin());
    const auto s = saff::feedback_distribution(u, lambda);
    std::copy(s.probabilities.begin(), s.probabilities.end(), probabilities);
  });
}

saff_status saff_project_simplex(const double* values, size_t length, double* out) {
  SAFF_REQUIRE(values);
  SAFF_REQUIRE(out);
  return guarded([&] {
    const auto projected = saff::project_to_simplex({values, length});
    std::copy(projected.begin(), projected.end(), out);
  });
}

}  // extern "C"
