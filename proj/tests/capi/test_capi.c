/* Exercises the shared library through its C header only. */
#include <teevil/teevil.h>

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                                                \
    do {                                                                            \
        if (!(cond)) {                                                              \
            fprintf(stderr, "%s:%d: expected %s (last error: %s)\n", __FILE__,      \
                    __LINE__, #cond, teevil_last_error());                          \
            ++failures;                                                             \
        }                                                                           \
    } while (0)

static int contains(const char* text, const char* needle)
{
    return text && strstr(text, needle) != NULL;
}

static teevil_scenario* load(const char* name)
{
    char path[1024];
    teevil_scenario* s = NULL;
    snprintf(path, sizeof path, "%s/%s.json", TEEVIL_SCENARIO_DIR, name);
    EXPECT(teevil_scenario_load(path, &s) == TEEVIL_OK);
    return s;
}

static void test_errors(void)
{
    teevil_scenario* s = NULL;
    EXPECT(teevil_scenario_load(NULL, &s) == TEEVIL_ERR_INVALID_ARGUMENT);
    EXPECT(strlen(teevil_last_error()) > 0);
    EXPECT(teevil_scenario_load("/nonexistent/teevil.json", &s) == TEEVIL_ERR_IO);
    EXPECT(s == NULL);
    EXPECT(teevil_scenario_parse("{ not json", &s) == TEEVIL_ERR_SCHEMA);
    EXPECT(teevil_scenario_parse("{\"name\": 3}", &s) == TEEVIL_ERR_SCHEMA);
    EXPECT(teevil_scenario_set_seed(NULL, 1) == TEEVIL_ERR_INVALID_ARGUMENT);
    EXPECT(strcmp(teevil_status_string(TEEVIL_OK), "ok") == 0);
    EXPECT(strcmp(teevil_status_string(TEEVIL_ERR_DIVERGED), "replay diverged") == 0);
    EXPECT(strlen(teevil_version()) > 0);
    /* Freeing NULL is a no-op. */
    teevil_scenario_free(NULL);
    teevil_run_free(NULL);
    teevil_string_free(NULL);
}

static void test_round_trip(void)
{
    teevil_scenario* s = load("baseline");
    char* text = NULL;
    teevil_scenario* again = NULL;
    char* text2 = NULL;
    if (!s)
        return;
    EXPECT(teevil_scenario_set_seed(s, 42) == TEEVIL_OK);
    EXPECT(teevil_scenario_json(s, &text) == TEEVIL_OK);
    EXPECT(contains(text, "\"seed\": 42"));
    EXPECT(teevil_scenario_parse(text, &again) == TEEVIL_OK);
    EXPECT(teevil_scenario_json(again, &text2) == TEEVIL_OK);
    EXPECT(text && text2 && strcmp(text, text2) == 0);
    teevil_string_free(text);
    teevil_string_free(text2);
    teevil_scenario_free(again);
    teevil_scenario_free(s);
}

static void test_run_verify_replay(void)
{
    teevil_scenario* s = load("baseline");
    teevil_run* run = NULL;
    char *report = NULL, *text = NULL, *log = NULL, *digest = NULL, *viol = NULL, *replay = NULL;
    if (!s)
        return;
    EXPECT(teevil_run_scenario(s, &run) == TEEVIL_OK);
    if (!run) {
        teevil_scenario_free(s);
        return;
    }
    EXPECT(teevil_run_report_json(run, &report) == TEEVIL_OK);
    EXPECT(contains(report, "\"verdict\""));
    EXPECT(teevil_run_report_text(run, &text) == TEEVIL_OK);
    EXPECT(text && strlen(text) > 0);
    EXPECT(teevil_run_event_log(run, &log) == TEEVIL_OK);
    EXPECT(teevil_run_report_digest(run, &digest) == TEEVIL_OK);
    EXPECT(digest && strlen(digest) == 64);

    EXPECT(teevil_verify(report, log, &viol) == TEEVIL_OK);
    EXPECT(viol && strcmp(viol, "[]") == 0);
    teevil_string_free(viol);
    viol = NULL;

    EXPECT(teevil_replay(log, &replay) == TEEVIL_OK);
    EXPECT(contains(replay, "\"identical\": true"));
    teevil_string_free(replay);
    replay = NULL;

    /* A changed event line must be reported as a divergence. */
    if (log) {
        char* at = strstr(log, " recv ");
        EXPECT(at != NULL);
        if (at) {
            memcpy(at, " RECV ", 6);
            EXPECT(teevil_replay(log, &replay) == TEEVIL_ERR_DIVERGED);
            EXPECT(contains(replay, "first_divergence"));
            teevil_string_free(replay);
            /* The tampered log no longer matches the report's log digest. */
            EXPECT(teevil_verify(report, log, &viol) == TEEVIL_ERR_VIOLATIONS);
            EXPECT(contains(viol, "log"));
            teevil_string_free(viol);
        }
    }

    teevil_string_free(report);
    teevil_string_free(text);
    teevil_string_free(log);
    teevil_string_free(digest);
    teevil_run_free(run);
    teevil_scenario_free(s);
}

static void test_estimate(void)
{
    teevil_scenario* s = load("replay_1000");
    char* out = NULL;
    if (!s)
        return;
    EXPECT(teevil_estimate(s, NULL, &out) == TEEVIL_OK);
    EXPECT(contains(out, "\"count\": 1000"));
    EXPECT(contains(out, "\"service_s\""));
    teevil_string_free(out);
    out = NULL;
    EXPECT(teevil_estimate(s, "no-such-campaign", &out) == TEEVIL_ERR_INVALID_ARGUMENT);
    EXPECT(contains(teevil_last_error(), "no-such-campaign"));
    teevil_scenario_free(s);
}

static void test_deanonymize(void)
{
    teevil_scenario* s = load("baseline");
    char* out = NULL;
    if (!s)
        return;
    EXPECT(teevil_deanonymize(s, "forum", &out) == TEEVIL_OK);
    EXPECT(out && strcmp(out, "[\"alice-0\",\"alice-1\",\"alice-2\"]") == 0);
    teevil_string_free(out);
    teevil_scenario_free(s);
}

int main(void)
{
    test_errors();
    test_round_trip();
    test_run_verify_replay();
    test_estimate();
    test_deanonymize();
    if (failures) {
        fprintf(stderr, "%d failure(s)\n", failures);
        return 1;
    }
    printf("capi: all checks passed\n");
    return 0;
}
