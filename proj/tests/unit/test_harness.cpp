#include "harness/estimate.hpp"
#include "harness/replay.hpp"
#include "harness/scenario.hpp"
#include "harness/verdict.hpp"
#include "harness/verify.hpp"
#include "harness/world.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

using namespace teevil;
using namespace teevil::harness;
using nlohmann::json;

namespace {

json baseline_json()
{
    std::ifstream in(std::string(TEEVIL_SCENARIO_DIR) + "/baseline.json");
    return json::parse(in);
}

std::vector<SchemaViolation> violations_for(const json& j)
{
    try {
        parse_scenario(j);
    } catch (const SchemaError& e) {
        return e.violations();
    }
    return {};
}

bool has_field(const std::vector<SchemaViolation>& v, const std::string& field)
{
    for (const auto& x : v)
        if (x.field == field)
            return true;
    return false;
}

std::set<std::string> checks_failing(const Report& r, const std::optional<std::string>& log = {})
{
    std::set<std::string> out;
    for (const auto& v : verify_report(r, log))
        out.insert(v.check);
    return out;
}

Report baseline_report()
{
    static const RunOutput out = run_scenario(parse_scenario(baseline_json()));
    return out.report;
}

} // namespace

TEST_CASE("schema: baseline parses and round-trips through canonical JSON")
{
    auto cfg = parse_scenario(baseline_json());
    CHECK(cfg.name == "baseline");
    CHECK(cfg.owner_groups.at(0).count == 3);
    auto again = parse_scenario(to_json(cfg));
    CHECK(to_json(again) == to_json(cfg));
}

TEST_CASE("schema: cut point outside 1-5 is rejected with its field")
{
    auto j = baseline_json();
    j["adversary"] = json::array({{{"kind", "cut"}, {"cut_point", 6}, {"campaign", "c1"}}});
    auto v = violations_for(j);
    CHECK(has_field(v, "adversary[0].cut_point"));
    j["adversary"][0]["cut_point"] = 0;
    CHECK(has_field(violations_for(j), "adversary[0].cut_point"));
    j["adversary"][0]["cut_point"] = 3;
    CHECK(violations_for(j).empty());
}

TEST_CASE("schema: negative deposit rate is rejected")
{
    auto j = baseline_json();
    j["economics"] = {{"deposit_rate", -0.1}};
    CHECK(has_field(violations_for(j), "economics.deposit_rate"));
}

TEST_CASE("schema: every violation is reported, not just the first")
{
    auto j = baseline_json();
    j["economics"] = {{"deposit_rate", -0.1}, {"fee_rate", 2}};
    j["bogus"] = 1;
    auto v = violations_for(j);
    CHECK(v.size() >= 3);
    CHECK(has_field(v, "bogus"));
    CHECK(has_field(v, "economics.fee_rate"));
}

TEST_CASE("schema: unreadable files are I/O errors")
{
    try {
        load_scenario("/nonexistent/scenario.json");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::io_error);
    }
}

TEST_CASE("report JSON round-trips and its digest is stable")
{
    Report r = baseline_report();
    Report back = report_from_json(to_json(r));
    CHECK(to_json(back) == to_json(r));
    CHECK(report_digest(back) == report_digest(r));
    CHECK(report_digest(r) == oracle::sha256_hex(to_json(r).dump()));
    CHECK_THROWS_AS(report_from_json(json{{"parties", 3}}), Error);
}

TEST_CASE("verify: an honest run is clean")
{
    auto cfg = parse_scenario(baseline_json());
    auto out = run_scenario(cfg);
    CHECK(verify_report(out.report, out.event_log).empty());
    CHECK(verify_report(out.report, strip_log_header(event_log_file(cfg, out.event_log))).empty());
}

TEST_CASE("verify: tampering is caught by the matching check")
{
    Report r = baseline_report();
    SUBCASE("party balance")
    {
        r.parties[1].end += Amount::from_units(1);
        CHECK(checks_failing(r).contains("conservation"));
    }
    SUBCASE("slot reward")
    {
        r.campaigns[0].slots[0].reward = Amount{};
        CHECK(checks_failing(r).contains("atomicity"));
    }
    SUBCASE("slot left pending")
    {
        r.campaigns[0].slots[0].status = "pending";
        CHECK(checks_failing(r).contains("final-status"));
    }
    SUBCASE("verdict")
    {
        r.verdict.parties[0].classification = "harmed";
        CHECK(checks_failing(r).contains("verdict"));
    }
    SUBCASE("burned without a trace")
    {
        r.campaigns[0].deposit_burned = Amount::from_units(5);
        CHECK_FALSE(checks_failing(r).empty());
    }
    SUBCASE("log swapped")
    {
        CHECK(checks_failing(r, std::string("0 net nothing\n")).contains("log-digest"));
    }
}

TEST_CASE("verdict: rules on synthetic reports")
{
    Report r;
    r.parties = {{"renter", "renter", "wallet-renter", Amount::from_coins(10), Amount::from_coins(9)},
                 {"o", "owner", "pay-o", Amount{}, Amount{}},
                 {"maintainer", "maintainer", "maintainer", Amount{}, Amount{}}};
    CampaignReport c;
    c.id = "c";
    c.renter = "renter";
    c.outcome = "terminated";
    c.funding_landed = Amount::from_coins(1);
    SlotReport s;
    s.slot_id = 0;
    s.owner = "o";
    s.price = Amount::from_coins(1);

    SUBCASE("paid without effect: owner advantaged, renter harmed")
    {
        s.status = "confirmed";
        s.applied = true;
        s.settlement_landed = true;
        s.reward = Amount::from_coins(0.95);
        s.fee = Amount::from_coins(0.05);
        s.deposit_share = Amount::from_coins(0.1);
        c.slots = {s};
        r.campaigns = {c};
        auto v = compute_verdict(r);
        CHECK(v.find("o")->classification == "advantaged");
        CHECK(v.find("renter")->classification == "harmed");
    }
    SUBCASE("effect without pay, caused by a drop: owner harmed, renter advantaged")
    {
        s.status = "timeout";
        s.applied = true;
        s.effect_present = true;
        c.slots = {s};
        r.campaigns = {c};
        r.drops = {{7, "host", "service_response", 3, "c", 0, "o"}};
        auto v = compute_verdict(r);
        CHECK(v.find("o")->classification == "harmed");
        CHECK(v.find("renter")->classification == "advantaged");
        CHECK(v.find("o")->evidence.size() >= 2);
    }
    SUBCASE("a loss the owner caused itself is self-harm")
    {
        s.status = "timeout";
        s.applied = true;
        s.effect_present = true;
        c.slots = {s};
        r.campaigns = {c};
        r.drops = {{7, "o", "service_response", 3, "c", 0, "o"}};
        CHECK(compute_verdict(r).find("o")->classification == "fair(self-harm)");
    }
    SUBCASE("stranded escrow harms the renter")
    {
        c.escrow_residual = Amount::from_coins(1);
        r.campaigns = {c};
        CHECK(compute_verdict(r).find("renter")->classification == "harmed");
    }
    SUBCASE("nothing happened: everyone fair")
    {
        r.campaigns = {c};
        for (const auto& p : compute_verdict(r).parties)
            CHECK(p.classification == "fair");
    }
}

TEST_CASE("estimate: closed form rounds")
{
    enclave::Params p;
    auto one = estimate_campaign(p, 1, 25, 25);
    CHECK(one.rounds_service == 1);
    CHECK(one.rounds_payment == 1);
    auto none = estimate_campaign(p, 0, 3, 3);
    CHECK(none.rounds_service == 0);
    CHECK(none.total_s() == 0.0);
    auto big = estimate_campaign(p, 1000, 25, 25);
    double mean = 1.202 + 0.402 + 0.769 + 1.560 + 0.355;
    CHECK(big.rounds_service == 40);
    CHECK(big.service_s == doctest::Approx(40 * mean));
    CHECK(big.payment_s == doctest::Approx(40 * 4.935));
    CHECK_THROWS_AS(estimate_campaign(p, 10, 0, 1), Error);
}

TEST_CASE("replay reproduces a recorded log and spots a tampered one")
{
    auto cfg = parse_scenario(baseline_json());
    auto out = run_scenario(cfg);
    std::string file = event_log_file(cfg, out.event_log);
    CHECK(file.rfind("# teevil-eventlog v1\n", 0) == 0);
    CHECK(strip_log_header(file) == out.event_log);
    CHECK(to_json(config_from_log(file)) == to_json(cfg));

    auto same = replay_log(file);
    CHECK(same.identical);
    CHECK(same.recorded_lines == same.replayed_lines);

    std::string tampered = file;
    auto pos = tampered.find(" recv ");
    REQUIRE(pos != std::string::npos);
    tampered.replace(pos, 6, " RECV ");
    auto diff = replay_log(tampered);
    CHECK_FALSE(diff.identical);
    REQUIRE(diff.first_divergence);
    CHECK(diff.recorded_line.find("RECV") != std::string::npos);

    CHECK_THROWS_AS(config_from_log("no header here\n"), Error);
}
