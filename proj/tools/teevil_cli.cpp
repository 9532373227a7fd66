// Command-line front end. Talks to the simulator only through the C API.
#include "teevil/teevil.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_schema = 1;
constexpr int exit_violation = 2;

struct CString {
    char* p = nullptr;
    ~CString() { teevil_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

using ScenarioPtr = std::unique_ptr<teevil_scenario, decltype(&teevil_scenario_free)>;
using RunPtr = std::unique_ptr<teevil_run, decltype(&teevil_run_free)>;

int report_status(teevil_status st, const std::string& what)
{
    std::cerr << "teevil: " << what << ": " << teevil_status_string(st);
    std::string detail = teevil_last_error();
    if (!detail.empty())
        std::cerr << ": " << detail;
    std::cerr << "\n";
    return st == TEEVIL_ERR_VIOLATIONS || st == TEEVIL_ERR_DIVERGED ? exit_violation : exit_schema;
}

std::optional<std::string> slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    out << text;
    return static_cast<bool>(out);
}

struct RunJob {
    std::string path;
    std::optional<std::uint64_t> seed;
    teevil_status status = TEEVIL_OK;
    std::string error;
    std::string name;
    std::string text;
    std::string json;
    std::string log;
    std::string digest;
};

void execute(RunJob& job)
{
    teevil_scenario* raw = nullptr;
    job.status = teevil_scenario_load(job.path.c_str(), &raw);
    if (job.status != TEEVIL_OK) {
        job.error = teevil_last_error();
        return;
    }
    ScenarioPtr sc(raw, teevil_scenario_free);
    if (job.seed)
        teevil_scenario_set_seed(sc.get(), *job.seed);
    teevil_run* run_raw = nullptr;
    job.status = teevil_run_scenario(sc.get(), &run_raw);
    if (job.status != TEEVIL_OK) {
        job.error = teevil_last_error();
        return;
    }
    RunPtr run(run_raw, teevil_run_free);
    CString text, json, log, digest;
    teevil_run_report_text(run.get(), &text.p);
    teevil_run_report_json(run.get(), &json.p);
    teevil_run_event_log(run.get(), &log.p);
    teevil_run_report_digest(run.get(), &digest.p);
    job.text = text.str();
    job.json = json.str();
    job.log = log.str();
    job.digest = digest.str();
    job.name = std::filesystem::path(job.path).stem().string();
}

int cmd_run(const std::vector<std::string>& scenarios, std::optional<std::uint64_t> seed, const std::string& report_out,
            const std::string& log_out, bool json, unsigned jobs)
{
    std::vector<RunJob> work;
    for (const auto& s : scenarios)
        work.push_back(RunJob{s, seed});
    // Simulations are independent and single-threaded; fan them out.
    std::size_t next = 0;
    std::mutex m;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < std::max(1u, std::min<unsigned>(jobs, work.size())); ++w)
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i;
                {
                    std::lock_guard lock(m);
                    if (next >= work.size())
                        return;
                    i = next++;
                }
                execute(work[i]);
            }
        });
    for (auto& t : pool)
        t.join();

    bool many = work.size() > 1;
    int rc = exit_ok;
    for (const auto& job : work) {
        if (job.status != TEEVIL_OK) {
            std::cerr << "teevil: " << job.path << ": " << teevil_status_string(job.status) << ": " << job.error
                      << "\n";
            rc = std::max(rc, job.status == TEEVIL_ERR_SCHEMA || job.status == TEEVIL_ERR_IO ? exit_schema : 1);
            continue;
        }
        std::cout << (json ? job.json + "\n" : job.text);
        if (many)
            std::cout << "\n";
        auto target = [&](const std::string& base, const char* suffix) {
            return many ? (std::filesystem::path(base) / (job.name + suffix)).string() : base;
        };
        if (!report_out.empty() && !write_file(target(report_out, ".report.json"), job.json + "\n")) {
            std::cerr << "teevil: cannot write report to " << report_out << "\n";
            rc = std::max(rc, 1);
        }
        if (!log_out.empty() && !write_file(target(log_out, ".events.log"), job.log)) {
            std::cerr << "teevil: cannot write event log to " << log_out << "\n";
            rc = std::max(rc, 1);
        }
    }
    return rc;
}

int cmd_verify(const std::string& report_path, const std::string& log_path)
{
    auto report = slurp(report_path);
    if (!report) {
        std::cerr << "teevil: cannot read " << report_path << "\n";
        return exit_schema;
    }
    std::optional<std::string> log;
    if (!log_path.empty()) {
        log = slurp(log_path);
        if (!log) {
            std::cerr << "teevil: cannot read " << log_path << "\n";
            return exit_schema;
        }
    }
    CString out;
    teevil_status st = teevil_verify(report->c_str(), log ? log->c_str() : nullptr, &out.p);
    if (st != TEEVIL_OK && st != TEEVIL_ERR_VIOLATIONS)
        return report_status(st, "verify");
    std::cout << out.str() << "\n";
    if (st == TEEVIL_ERR_VIOLATIONS)
        return report_status(st, "verify");
    std::cout << "verify: all invariants hold\n";
    return exit_ok;
}

int cmd_replay(const std::string& log_path)
{
    auto log = slurp(log_path);
    if (!log) {
        std::cerr << "teevil: cannot read " << log_path << "\n";
        return exit_schema;
    }
    CString out;
    teevil_status st = teevil_replay(log->c_str(), &out.p);
    if (st != TEEVIL_OK && st != TEEVIL_ERR_DIVERGED)
        return report_status(st, "replay");
    std::cout << out.str() << "\n";
    return st == TEEVIL_OK ? exit_ok : report_status(st, "replay");
}

int cmd_estimate(const std::string& scenario, const std::string& campaign)
{
    teevil_scenario* raw = nullptr;
    teevil_status st = teevil_scenario_load(scenario.c_str(), &raw);
    if (st != TEEVIL_OK)
        return report_status(st, scenario);
    ScenarioPtr sc(raw, teevil_scenario_free);
    CString out;
    st = teevil_estimate(sc.get(), campaign.empty() ? nullptr : campaign.c_str(), &out.p);
    if (st != TEEVIL_OK)
        return report_status(st, "estimate");
    std::cout << out.str() << "\n";
    return exit_ok;
}

int cmd_deanonymize(const std::string& scenario, const std::string& service)
{
    teevil_scenario* raw = nullptr;
    teevil_status st = teevil_scenario_load(scenario.c_str(), &raw);
    if (st != TEEVIL_OK)
        return report_status(st, scenario);
    ScenarioPtr sc(raw, teevil_scenario_free);
    CString out;
    st = teevil_deanonymize(sc.get(), service.c_str(), &out.p);
    if (st != TEEVIL_OK)
        return report_status(st, "deanonymize");
    std::cout << out.str() << "\n";
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Deterministic simulator for the enclave-mediated identity lease protocol"};
    app.set_version_flag("--version", std::string(teevil_version()));
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run scenarios and print their reports");
    std::vector<std::string> scenarios;
    std::optional<std::uint64_t> seed;
    std::string report_out, log_out;
    bool json = false;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    run->add_option("--scenario", scenarios, "Scenario file(s)")->required()->check(CLI::ExistingFile);
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--report-out", report_out, "Write the JSON report here (a directory for several scenarios)");
    run->add_option("--log-out", log_out, "Write the event log here (a directory for several scenarios)");
    run->add_flag("--json", json, "Print the JSON report instead of text");
    run->add_option("--jobs", jobs, "Parallel workers for several scenarios")->check(CLI::PositiveNumber);

    auto* verify = app.add_subcommand("verify", "Check a report against the invariant suite");
    std::string report_in, log_in;
    verify->add_option("--report", report_in, "JSON report")->required();
    verify->add_option("--log", log_in, "Event-log file for evidence and digest checks");

    auto* replay = app.add_subcommand("replay", "Re-run the config embedded in an event log and diff");
    std::string replay_log;
    replay->add_option("--log", replay_log, "Event-log file")->required();

    auto* estimate = app.add_subcommand("estimate", "Closed-form phase durations at mean latencies");
    std::string est_scenario, est_campaign;
    estimate->add_option("--scenario", est_scenario, "Scenario file")->required();
    estimate->add_option("--campaign", est_campaign, "Campaign id (default: first)");

    auto* deanon = app.add_subcommand("deanonymize", "Owners a colluding service can name via a hidden item");
    std::string dn_scenario, dn_service;
    deanon->add_option("--scenario", dn_scenario, "Scenario file")->required();
    deanon->add_option("--service", dn_service, "Service id")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_schema;
    }

    if (*run) {
        if (scenarios.size() > 1)
            for (const auto* dir : {&report_out, &log_out})
                if (!dir->empty())
                    std::filesystem::create_directories(*dir);
        return cmd_run(scenarios, seed, report_out, log_out, json, jobs);
    }
    if (*verify)
        return cmd_verify(report_in, log_in);
    if (*replay)
        return cmd_replay(replay_log);
    if (*estimate)
        return cmd_estimate(est_scenario, est_campaign);
    return cmd_deanonymize(dn_scenario, dn_service);
}
