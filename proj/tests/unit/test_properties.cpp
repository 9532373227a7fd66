#include "fuzz.hpp"
#include "harness/report.hpp"
#include "harness/verify.hpp"
#include "harness/world.hpp"

#include <doctest.h>

using namespace teevil;
using namespace teevil::harness;

namespace {

ScenarioConfig scenario(const std::string& name)
{
    return load_scenario(std::string(TEEVIL_SCENARIO_DIR) + "/" + name + ".json");
}

std::string describe(const std::vector<Violation>& vs)
{
    std::string out;
    for (const auto& v : vs)
        out += v.check + ": " + v.detail + "\n";
    return out;
}

// Settled amounts per slot add up to the campaign totals, and a landed
// settlement pays reward, fee and deposit share together.
void check_atomic(const Report& r)
{
    for (const auto& c : r.campaigns) {
        // Slot amounts come from the settlement tx even when it never landed.
        Amount rewards, fees, deposit;
        for (const auto& s : c.slots) {
            if (!s.settlement_landed)
                continue;
            CHECK(s.reward > Amount{});
            CHECK(s.fee > Amount{});
            CHECK(s.deposit_share > Amount{});
            rewards += s.reward;
            fees += s.fee;
            deposit += s.deposit_share;
        }
        CHECK(rewards == c.rewards_paid);
        CHECK(fees == c.fees_paid);
        CHECK(deposit == c.deposit_returned);
    }
}

} // namespace

TEST_CASE("conservation and atomicity hold across seeds with latency noise")
{
    for (const char* name : {"baseline", "cut3_service_response", "kill_payment_enclave", "cut45_broadcast_survives"}) {
        auto base = scenario(name);
        for (std::uint64_t seed = 1; seed <= 8; ++seed) {
            auto cfg = base;
            cfg.seed = seed * 7919;
            auto out = run_scenario(cfg);
            INFO(name, " seed ", cfg.seed);
            auto vs = verify_report(out.report, out.event_log);
            CHECK_MESSAGE(vs.empty(), describe(vs));
            CHECK(out.report.delta_sum() == -out.report.burned);
            check_atomic(out.report);
        }
    }
}

TEST_CASE("random drops, delays and kills never break the invariants")
{
    auto base = scenario("kill_payment_enclave");
    base.adversary.clear();
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        auto cfg = fuzz::perturb(base, seed);
        auto out = run_scenario(cfg);
        INFO("seed ", seed);
        auto vs = verify_report(out.report, out.event_log);
        CHECK_MESSAGE(vs.empty(), describe(vs));
        check_atomic(out.report);
    }
}

TEST_CASE("same scenario and seed give the same log and report")
{
    auto cfg = fuzz::perturb(scenario("baseline"), 17);
    auto a = run_scenario(cfg);
    auto b = run_scenario(cfg);
    CHECK(a.event_log == b.event_log);
    CHECK(report_digest(a.report) == report_digest(b.report));
    cfg.seed = 18;
    auto c = run_scenario(cfg);
    CHECK(c.report.seed == 18);
}
