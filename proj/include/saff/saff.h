/* C interface to the social fairness-preference learner.
 *
 * Objects are opaque handles created by saff_*_create / saff_*_load and
 * released with the matching saff_*_free. Every fallible call returns a
 * saff_status; on failure saff_last_error() holds a message for the calling
 * thread until its next failing call.
 */
#ifndef SAFF_SAFF_H
#define SAFF_SAFF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef SAFF_BUILDING_LIBRARY
#    define SAFF_API __declspec(dllexport)
#  else
#    define SAFF_API __declspec(dllimport)
#  endif
#else
#  define SAFF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum saff_status {
  SAFF_OK = 0,
  SAFF_ERR_VALIDATION = 1,
  SAFF_ERR_IO = 2,
  SAFF_ERR_CONFIG = 3,
  SAFF_ERR_DIMENSION = 4,
  SAFF_ERR_NUMERIC = 5,
  SAFF_ERR_INVALID_ARGUMENT = 6,
  SAFF_ERR_INTERNAL = 7
} saff_status;

#define SAFF_NUM_NOTIONS 6
#define SAFF_NUM_SCORES 7

typedef struct saff_config saff_config;
typedef struct saff_tuples saff_tuples;
typedef struct saff_responses saff_responses;

typedef void (*saff_warning_fn)(const char* message, void* user_data);

SAFF_API const char* saff_version(void);
/* Stable lower-case category name, e.g. "validation". */
SAFF_API const char* saff_status_name(saff_status status);
SAFF_API const char* saff_last_error(void);

/* Receives warnings (dropped participants, flagged tuples). NULL disables. */
SAFF_API void saff_set_warning_handler(saff_warning_fn fn, void* user_data);

/* ---- configuration ---- */
SAFF_API saff_status saff_config_create(saff_config** out);
SAFF_API saff_status saff_config_load(const char* path, saff_config** out);
SAFF_API saff_status saff_config_parse(const char* json_text, saff_config** out);
SAFF_API saff_status saff_config_set_seed(saff_config* config, uint64_t seed);
/* "age", "gender", "race" or "all". */
SAFF_API saff_status saff_config_set_attribute(saff_config* config, const char* attribute);
/* Canonical JSON; the returned string lives until the handle is freed or
 * modified. */
SAFF_API const char* saff_config_to_json(saff_config* config);
SAFF_API void saff_config_free(saff_config* config);

/* ---- data ---- */
SAFF_API saff_status saff_tuples_load(const char* path, saff_tuples** out);
SAFF_API size_t saff_tuples_count(const saff_tuples* tuples);
/* Records in tuple `index`, or 0 when out of range. */
SAFF_API size_t saff_tuples_records(const saff_tuples* tuples, size_t index);
SAFF_API void saff_tuples_free(saff_tuples* tuples);

SAFF_API saff_status saff_responses_load(const char* path, const saff_tuples* tuples,
                                         saff_responses** out);
/* Retained participants (complete responders). */
SAFF_API size_t saff_responses_participants(const saff_responses* responses);
SAFF_API size_t saff_responses_dropped(const saff_responses* responses);
/* Question is "overall", "age", "gender" or "race"; returns 1 when present. */
SAFF_API int saff_responses_has_question(const saff_responses* responses, const char* question);
SAFF_API void saff_responses_free(saff_responses* responses);

/* ---- pipeline commands; each writes its reports into out_dir ---- */
SAFF_API saff_status saff_run_audit(const saff_tuples* tuples, const saff_config* config,
                                    const char* out_dir);
/* attribute: "age", "gender", "race", "all" or NULL for the config's choice. */
SAFF_API saff_status saff_run_learn(const saff_tuples* tuples, const saff_responses* responses,
                                    const char* attribute, const saff_config* config,
                                    const char* out_dir);
SAFF_API saff_status saff_run_simulate(const saff_config* config, const char* out_dir);
SAFF_API saff_status saff_run_gradcheck(size_t instances, uint64_t seed,
                                        double* max_relative_error,
                                        double* mean_relative_error);

/* ---- model primitives ---- */
/* Signed differences (SP, C, AE, EO, PE, OMR) for one loaded tuple; undefined
 * receives 1 where a conditioning set was empty. */
SAFF_API saff_status saff_fairness_profile(const saff_tuples* tuples, size_t index,
                                           const char* attribute, const saff_config* config,
                                           double values[SAFF_NUM_NOTIONS],
                                           int undefined[SAFF_NUM_NOTIONS]);
SAFF_API saff_status saff_utility_vector(double psi, double sigma,
                                         double utilities[SAFF_NUM_SCORES]);
SAFF_API saff_status saff_feedback_distribution(const double utilities[SAFF_NUM_SCORES],
                                                double lambda,
                                                double probabilities[SAFF_NUM_SCORES]);
SAFF_API saff_status saff_project_simplex(const double* values, size_t length, double* out);

#ifdef __cplusplus
}
#endif

#endif /* SAFF_SAFF_H */
