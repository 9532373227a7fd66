#ifndef TEEVIL_TEEVIL_H
#define TEEVIL_TEEVIL_H

#include <stdint.h>

#if defined(TEEVIL_BUILDING_LIBRARY)
#define TEEVIL_API __attribute__((visibility("default")))
#else
#define TEEVIL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum teevil_status {
    TEEVIL_OK = 0,
    TEEVIL_ERR_INVALID_ARGUMENT = 1,
    /* Config or report document failed validation; see teevil_last_error. */
    TEEVIL_ERR_SCHEMA = 2,
    TEEVIL_ERR_IO = 3,
    /* verify found invariant violations. */
    TEEVIL_ERR_VIOLATIONS = 4,
    /* replay produced a different event log. */
    TEEVIL_ERR_DIVERGED = 5,
    TEEVIL_ERR_INTERNAL = 6
} teevil_status;

typedef struct teevil_scenario teevil_scenario;
typedef struct teevil_run teevil_run;

TEEVIL_API const char* teevil_version(void);
TEEVIL_API const char* teevil_status_string(teevil_status status);
/* Detail for the last failed call on this thread, "" if none. */
TEEVIL_API const char* teevil_last_error(void);

/* Strings returned through char** are owned by the caller. */
TEEVIL_API void teevil_string_free(char* text);

TEEVIL_API teevil_status teevil_scenario_load(const char* path, teevil_scenario** out);
TEEVIL_API teevil_status teevil_scenario_parse(const char* json_text, teevil_scenario** out);
TEEVIL_API teevil_status teevil_scenario_set_seed(teevil_scenario* scenario, uint64_t seed);
TEEVIL_API teevil_status teevil_scenario_json(const teevil_scenario* scenario, char** out);
TEEVIL_API void teevil_scenario_free(teevil_scenario* scenario);

/* Runs the scenario to completion in virtual time. */
TEEVIL_API teevil_status teevil_run_scenario(const teevil_scenario* scenario, teevil_run** out);
TEEVIL_API teevil_status teevil_run_report_json(const teevil_run* run, char** out);
TEEVIL_API teevil_status teevil_run_report_text(const teevil_run* run, char** out);
/* Event-log file: version line, embedded config, then one event per line. */
TEEVIL_API teevil_status teevil_run_event_log(const teevil_run* run, char** out);
/* Hex SHA-256 of the canonical report. */
TEEVIL_API teevil_status teevil_run_report_digest(const teevil_run* run, char** out);
TEEVIL_API void teevil_run_free(teevil_run* run);

/* Checks a report (and optionally its event-log file, may be NULL).
   violations_json receives a JSON array, empty when the report is clean;
   the return is TEEVIL_ERR_VIOLATIONS if it is not. */
TEEVIL_API teevil_status teevil_verify(const char* report_json, const char* event_log_file, char** violations_json);

/* Re-runs the config embedded in an event-log file. result_json describes
   the first divergence, if any. */
TEEVIL_API teevil_status teevil_replay(const char* event_log_file, char** result_json);

/* Mean-latency phase estimate for one campaign of the scenario, or the
   first if campaign_id is NULL. */
TEEVIL_API teevil_status teevil_estimate(const teevil_scenario* scenario, const char* campaign_id, char** out_json);

/* Owners a colluding service can name after planting a hidden item;
   JSON array of owner ids. */
TEEVIL_API teevil_status teevil_deanonymize(const teevil_scenario* scenario, const char* service_id, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
