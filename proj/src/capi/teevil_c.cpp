#include "teevil/teevil.h"

#include "common/error.hpp"
#include "harness/estimate.hpp"
#include "harness/replay.hpp"
#include "harness/verify.hpp"
#include "harness/world.hpp"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>

using namespace teevil;
using namespace teevil::harness;

struct teevil_scenario {
    ScenarioConfig config;
};

struct teevil_run {
    ScenarioConfig config;
    RunOutput output;
};

namespace {

thread_local std::string last_error;

teevil_status fail(teevil_status status, std::string detail)
{
    last_error = std::move(detail);
    return status;
}

char* dup(const std::string& s)
{
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out)
        std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

teevil_status put(char** out, const std::string& s)
{
    *out = dup(s);
    return *out ? TEEVIL_OK : fail(TEEVIL_ERR_INTERNAL, "out of memory");
}

std::string describe(const SchemaError& e)
{
    std::string text;
    for (const auto& v : e.violations())
        text += (text.empty() ? "" : "; ") + v.field + ": " + v.cause;
    return text.empty() ? e.what() : text;
}

/// Maps every exception to a status so nothing crosses the C boundary.
template <typename F>
teevil_status guarded(F&& f)
{
    last_error.clear();
    try {
        return f();
    } catch (const SchemaError& e) {
        return fail(TEEVIL_ERR_SCHEMA, describe(e));
    } catch (const Error& e) {
        switch (e.code()) {
        case ErrorCode::schema_error: return fail(TEEVIL_ERR_SCHEMA, e.what());
        case ErrorCode::io_error: return fail(TEEVIL_ERR_IO, e.what());
        case ErrorCode::not_found: return fail(TEEVIL_ERR_INVALID_ARGUMENT, e.what());
        default: return fail(TEEVIL_ERR_INTERNAL, e.what());
        }
    } catch (const nlohmann::json::exception& e) {
        return fail(TEEVIL_ERR_SCHEMA, e.what());
    } catch (const std::exception& e) {
        return fail(TEEVIL_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(TEEVIL_ERR_INTERNAL, "unknown exception");
    }
}

} // namespace

extern "C" {

const char* teevil_version(void) { return "1.0.0"; }

const char* teevil_status_string(teevil_status status)
{
    switch (status) {
    case TEEVIL_OK: return "ok";
    case TEEVIL_ERR_INVALID_ARGUMENT: return "invalid argument";
    case TEEVIL_ERR_SCHEMA: return "schema error";
    case TEEVIL_ERR_IO: return "i/o error";
    case TEEVIL_ERR_VIOLATIONS: return "invariant violations";
    case TEEVIL_ERR_DIVERGED: return "replay diverged";
    case TEEVIL_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* teevil_last_error(void) { return last_error.c_str(); }

void teevil_string_free(char* text) { std::free(text); }

teevil_status teevil_scenario_load(const char* path, teevil_scenario** out)
{
    if (!path || !out)
        return fail(TEEVIL_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new teevil_scenario{load_scenario(path)};
        return TEEVIL_OK;
    });
}

teevil_status teevil_scenario_parse(const char* json_text, teevil_scenario** out)
{
    if (!json_text || !out)
        return fail(TEEVIL_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new teevil_scenario{parse_scenario(nlohmann::json::parse(json_text))};
        return TEEVIL_OK;
    });
}

teevil_status teevil_scenario_set_seed(teevil_scenario* scenario, uint64_t seed)
{
    if (!scenario)
        return fail(TEEVIL_ERR_INVALID_ARGUMENT, "null scenario");
    scenario->config.seed = seed;
    return TEEVIL_OK;
}

teevil_status teevil_scenario_json(const teevil_scenario* scenario, char** out)
{
    if (!scenario || !out)
        return fail(TEEVIL_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { return put(out, to_json(scenario->config).dump(2)); });
}

void teevil_scenario_free(teevil_scenario* scenario) { delete scenario; }

teevil_status teevil_run_scenario(const teevil_scenario* scenario, teevil_run** out)
{
    if (!scenario || !out)
        return fail(TEEVIL_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new teevil_run{scenario->config, run_scenario(scenario->config)};
        return TEEVIL_OK;
    });
}

teevil_status teevil_run_report_json(const teevil_run* run, char** out)
{
    if (!run || !out)
        return fail(TEEVIL_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { return put(out, to_json(run->output.report).dump(2)); });
}

teevil_status teevil_run_report_text(const teevil_run* run, char** out)
{
    if (!run || !out)
        return fail(TEEVIL_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { return put(out, render_text(run->output.report)); });
}

teevil_status teevil_run_event_log(const teevil_run* run, char** out)
{
    if (!run || !out)
        return fail(TEEVIL_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { return put(out, event_log_file(run->config, run->output.event_log)); });
}

teevil_status teevil_run_report_digest(const teevil_run* run, char** out)
{
    if (!run || !out)
        return fail(TEEVIL_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] { return put(out, report_digest(run->output.report)); });
}

void teevil_run_free(teevil_run* run) { delete run; }

teevil_status teevil_verify(const char* report_json, const char* event_log_file, char** violations_json)
{
    if (!report_json || !violations_json)
        return fail(TEEVIL_ERR_INVALID_ARGUMENT, "null argument");
    *violations_json = nullptr;
    return guarded([&] {
        Report report = report_from_json(nlohmann::json::parse(report_json));
        std::optional<std::string> log;
        if (event_log_file)
            log = strip_log_header(event_log_file);
        auto violations = verify_report(report, log);
        nlohmann::json j = nlohmann::json::array();
        for (const auto& v : violations)
            j.push_back({{"check", v.check}, {"detail", v.detail}});
        teevil_status st = put(violations_json, j.dump(2));
        if (st != TEEVIL_OK)
            return st;
        if (!violations.empty())
            return fail(TEEVIL_ERR_VIOLATIONS, std::to_string(violations.size()) + " violation(s)");
        return TEEVIL_OK;
    });
}

teevil_status teevil_replay(const char* event_log_file, char** result_json)
{
    if (!event_log_file || !result_json)
        return fail(TEEVIL_ERR_INVALID_ARGUMENT, "null argument");
    *result_json = nullptr;
    return guarded([&] {
        ReplayResult r = replay_log(event_log_file);
        nlohmann::json j{{"identical", r.identical},
                         {"recorded_lines", r.recorded_lines},
                         {"replayed_lines", r.replayed_lines}};
        if (r.first_divergence) {
            j["first_divergence"] = *r.first_divergence;
            j["recorded"] = r.recorded_line;
            j["replayed"] = r.replayed_line;
        }
        teevil_status st = put(result_json, j.dump(2));
        if (st != TEEVIL_OK)
            return st;
        if (!r.identical)
            return fail(TEEVIL_ERR_DIVERGED, "diverged at line " + std::to_string(*r.first_divergence));
        return TEEVIL_OK;
    });
}

teevil_status teevil_estimate(const teevil_scenario* scenario, const char* campaign_id, char** out_json)
{
    if (!scenario || !out_json)
        return fail(TEEVIL_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const ScenarioConfig& cfg = scenario->config;
        const CampaignConfig* c = nullptr;
        for (const auto& cc : cfg.campaigns)
            if (!campaign_id || cc.id == campaign_id) {
                c = &cc;
                break;
            }
        if (!c)
            return fail(TEEVIL_ERR_INVALID_ARGUMENT, campaign_id ? std::string("no campaign ") + campaign_id
                                                                 : std::string("scenario has no campaigns"));
        Estimate e = estimate_campaign(cfg.params, c->count, cfg.topology.service_enclaves,
                                       cfg.topology.payment_enclaves);
        nlohmann::json j{{"campaign", c->id},
                         {"count", c->count},
                         {"service_enclaves", cfg.topology.service_enclaves},
                         {"payment_enclaves", cfg.topology.payment_enclaves},
                         {"service_rounds", e.rounds_service},
                         {"payment_rounds", e.rounds_payment},
                         {"service_s", e.service_s},
                         {"payment_s", e.payment_s},
                         {"total_s", e.total_s()}};
        return put(out_json, j.dump(2));
    });
}

teevil_status teevil_deanonymize(const teevil_scenario* scenario, const char* service_id, char** out_json)
{
    if (!scenario || !service_id || !out_json)
        return fail(TEEVIL_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        nlohmann::json j = run_deanonymization_campaign(scenario->config, service_id);
        return put(out_json, j.dump());
    });
}

} // extern "C"
