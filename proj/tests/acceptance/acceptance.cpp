// One PASS/FAIL line per acceptance criterion. Exit status is non-zero if
// any criterion fails.

#include "brute.hpp"
#include "fuzz.hpp"
#include "gossip/gossip.hpp"
#include "harness/estimate.hpp"
#include "harness/verify.hpp"
#include "harness/world.hpp"
#include "ledger/chain.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

using namespace teevil;
using namespace teevil::harness;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    void fail(const std::string& why)
    {
        if (pass)
            detail.clear();
        pass = false;
        if (!detail.empty())
            detail += "; ";
        detail += why;
    }
};

ScenarioConfig scenario(const std::string& name)
{
    return load_scenario(std::string(TEEVIL_SCENARIO_DIR) + "/" + name + ".json");
}

std::string verdict_of(const Report& r, const std::string& party)
{
    const auto* v = r.verdict.find(party);
    return v ? v->classification : "missing";
}

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

// Runs fn(i) for i in [0, n) on all cores.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn)
{
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++)
                fn(i);
        });
    for (auto& t : pool)
        t.join();
}

// 1. Closed-form phase durations for 1000 actions over 25 + 25 enclaves.
Outcome replay_timing()
{
    Outcome o;
    auto cfg = scenario("replay_1000");
    auto t0 = std::chrono::steady_clock::now();
    auto out = run_scenario(cfg);
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto& c = out.report.campaigns.at(0);

    double action_mean = 0;
    for (const auto& r : cfg.params.latency.requests)
        action_mean += r.mean_s;
    std::size_t rounds_s = (c.count + cfg.topology.service_enclaves - 1) / cfg.topology.service_enclaves;
    std::size_t rounds_p = (c.count + cfg.topology.payment_enclaves - 1) / cfg.topology.payment_enclaves;
    double expect_s = static_cast<double>(rounds_s) * action_mean;
    double expect_p = static_cast<double>(rounds_p) * cfg.params.latency.snark.mean_s;

    auto est = estimate_campaign(cfg.params, c.count, cfg.topology.service_enclaves, cfg.topology.payment_enclaves);
    if (std::abs(est.service_s - expect_s) > 1e-9 || std::abs(est.payment_s - expect_p) > 1e-9)
        o.fail("estimate " + fmt(est.service_s) + "/" + fmt(est.payment_s) + " disagrees with closed form");
    if (std::abs(c.phases.service_s - expect_s) > 1e-3)
        o.fail("service phase " + fmt(c.phases.service_s) + " s, expected " + fmt(expect_s));
    if (std::abs(c.phases.payment_s - expect_p) > 1e-3)
        o.fail("payment phase " + fmt(c.phases.payment_s) + " s, expected " + fmt(expect_p));
    if (std::abs(c.phases.service_s - 160.0) > 16.0)
        o.fail("service phase outside 160 s +-10%");
    if (std::abs(c.phases.payment_s - 200.0) > 20.0)
        o.fail("payment phase outside 200 s +-10%");
    if (wall >= 10.0)
        o.fail("wall time " + fmt(wall) + " s");
    if (o.pass)
        o.detail = "service " + fmt(c.phases.service_s) + " s, payment " + fmt(c.phases.payment_s) + " s, wall " +
                   fmt(wall) + " s";
    return o;
}

// 2. One scripted scenario per cut point plus the single-surviving-path variants.
Outcome cut_matrix()
{
    Outcome o;
    auto all_fair = [&](const Report& r, const std::string& label) {
        for (const auto& pv : r.verdict.parties)
            if (pv.classification != "fair")
                o.fail(label + ": " + pv.party + " is " + pv.classification);
    };
    auto clean = [&](const RunOutput& out, const std::string& label) {
        for (const auto& v : verify_report(out.report, out.event_log))
            o.fail(label + ": " + v.check + " " + v.detail);
    };

    {
        auto out = run_scenario(scenario("cut1_forged_view"));
        clean(out, "cut1");
        for (const auto& s : out.report.campaigns.at(0).slots)
            if (s.applied || s.effect_present || s.status != "skipped_inconsistent")
                o.fail("cut1: slot " + std::to_string(s.slot_id) + " acted (" + s.status + ")");
        for (const auto& pv : out.report.verdict.parties)
            if (pv.party != "renter" && pv.classification != "fair")
                o.fail("cut1: " + pv.party + " is " + pv.classification);
        if (verdict_of(out.report, "renter") == "harmed" || verdict_of(out.report, "renter") == "advantaged")
            o.fail("cut1: renter " + verdict_of(out.report, "renter"));
    }
    {
        auto out = run_scenario(scenario("cut2_owner_block"));
        clean(out, "cut2");
        bool skipped = false, substituted = false;
        for (const auto& s : out.report.campaigns.at(0).slots) {
            for (const auto& [owner, _] : s.skipped)
                skipped |= owner == "alice-0";
            substituted |= s.owner == "alice-3" && s.status == "confirmed";
            if (s.owner == "alice-0")
                o.fail("cut2: alice-0 still holds a slot");
        }
        if (!skipped || !substituted)
            o.fail("cut2: skip/substitute not observed");
        all_fair(out.report, "cut2");
    }
    {
        auto out = run_scenario(scenario("cut3_service_response"));
        clean(out, "cut3");
        const auto& c = out.report.campaigns.at(0);
        Amount per_slot = Amount::from_units(c.deposit_required.units() / static_cast<std::int64_t>(c.slots.size()));
        for (const auto& s : c.slots) {
            if (s.owner != "alice-1")
                continue;
            if (!s.applied || !s.effect_present)
                o.fail("cut3: action not applied");
            if (s.status != "timeout")
                o.fail("cut3: slot status " + s.status);
            if (s.settlement_landed || s.reward > Amount{})
                o.fail("cut3: reward paid");
        }
        if (c.deposit_burned != per_slot)
            o.fail("cut3: burned " + c.deposit_burned.to_string() + ", expected " + per_slot.to_string());
        if (verdict_of(out.report, "alice-1") != "harmed" || verdict_of(out.report, "renter") != "harmed")
            o.fail("cut3: alice-1/renter not harmed");
        for (const char* p : {"alice-0", "alice-2", "maintainer"})
            if (verdict_of(out.report, p) != "fair")
                o.fail(std::string("cut3: ") + p + " " + verdict_of(out.report, p));
    }
    auto cut45 = scenario("cut45_all_settlement_paths");
    {
        auto out = run_scenario(cut45);
        clean(out, "cut4+5");
        for (const auto& s : out.report.campaigns.at(0).slots)
            if (s.settlement_landed)
                o.fail("cut4+5: slot " + std::to_string(s.slot_id) + " settled");
        const auto& c45 = out.report.campaigns.at(0);
        if (c45.rewards_paid > Amount{} || c45.deposit_returned > Amount{})
            o.fail("cut4+5: rewards " + c45.rewards_paid.to_string() + " deposit " + c45.deposit_returned.to_string());
        for (const auto& pv : out.report.verdict.parties)
            if ((pv.role == "owner" || pv.role == "renter") && pv.classification != "harmed")
                o.fail("cut4+5: " + pv.party + " is " + pv.classification);
    }
    static const char* path_names[] = {"renter copy", "owner copy", "host broadcast"};
    for (std::size_t keep = 0; keep < cut45.adversary.size(); ++keep) {
        auto cfg = cut45;
        cfg.adversary.erase(cfg.adversary.begin() + static_cast<std::ptrdiff_t>(keep));
        std::string label = std::string("only ") + path_names[keep];
        auto out = run_scenario(cfg);
        clean(out, label);
        for (const auto& s : out.report.campaigns.at(0).slots)
            if (!s.settlement_landed || s.reward <= Amount{} || s.fee <= Amount{} || s.deposit_share <= Amount{})
                o.fail(label + ": slot " + std::to_string(s.slot_id) + " not settled atomically");
        all_fair(out.report, label);
    }
    if (o.pass)
        o.detail = "cut points 1-5 and 3 single-path variants match";
    return o;
}

// 3. Random drop/kill schedules: deposit completeness and atomic settlement.
Outcome deposit_completeness()
{
    Outcome o;
    std::vector<ScenarioConfig> bases;
    for (const char* n : {"baseline", "kill_payment_enclave", "cut3_service_response", "distributed_handoff"}) {
        auto c = scenario(n);
        c.adversary.clear();
        bases.push_back(c);
    }
    constexpr std::size_t runs = 1000;
    std::mutex mu;
    std::size_t full_returns = 0;
    parallel_for(runs, [&](std::size_t i) {
        auto cfg = fuzz::perturb(bases[i % bases.size()], 1000 + i);
        auto out = run_scenario(cfg);
        std::vector<std::string> problems;
        for (const auto& v : verify_report(out.report, out.event_log))
            problems.push_back(v.check + ": " + v.detail);
        bool full = false;
        for (const auto& c : out.report.campaigns) {
            // Slot amounts describe the settlement tx; only landed ones moved coins.
            Amount deposit, rewards, fees;
            for (const auto& s : c.slots) {
                if (!s.settlement_landed)
                    continue;
                if (s.reward <= Amount{} || s.fee <= Amount{} || s.deposit_share <= Amount{})
                    problems.push_back("atomicity: " + c.id + " slot " + std::to_string(s.slot_id));
                deposit += s.deposit_share;
                rewards += s.reward;
                fees += s.fee;
            }
            if (deposit != c.deposit_returned)
                problems.push_back("deposit returned outside a reward settlement in " + c.id);
            if (rewards != c.rewards_paid || fees != c.fees_paid)
                problems.push_back("reward or fee paid outside a settlement in " + c.id);
            if (c.slots.empty())
                continue;
            auto k = static_cast<std::int64_t>(c.slots.size());
            Amount all_shares = Amount::from_units(c.deposit_required.units() / k * k);
            if (all_shares > Amount{} && c.deposit_returned >= all_shares) {
                full = true;
                for (const auto& s : c.slots)
                    if (!s.settlement_landed)
                        problems.push_back("full deposit back but slot " + std::to_string(s.slot_id) + " of " + c.id +
                                           " unpaid");
            }
        }
        std::lock_guard lock(mu);
        full_returns += full;
        for (const auto& p : problems)
            o.fail("seed " + std::to_string(cfg.seed) + " " + p);
    });
    if (full_returns == 0)
        o.fail("no run returned a full deposit; the property was never exercised");
    if (o.pass)
        o.detail = std::to_string(runs) + " seeds, " + std::to_string(full_returns) + " with full deposit return";
    else if (o.detail.size() > 600)
        o.detail = o.detail.substr(0, 600) + " ...";
    return o;
}

// 4. check_consistency against a brute-force comparator on every fork-at-k pair.
Outcome consistency_oracle()
{
    Outcome o;
    using namespace teevil::ledger;
    constexpr unsigned bits = 6;
    constexpr std::size_t max_len = 6;
    auto keys = std::make_shared<KeyRegistry>();
    auto key = keys->create("alice", 1);
    Chain genesis = Chain::make_genesis(bits, {{"alice", Amount::from_coins(1), OutputKind::issuance}}, 3);
    Note note = genesis.unspent_for("alice").front();

    auto extend = [&](Chain c, std::size_t len, const std::string& tag) {
        bool first = true;
        while (c.size() < len) {
            std::vector<Transaction> txs;
            if (first && !tag.empty()) {
                Transaction tx;
                tx.inputs = {note.id};
                tx.outputs = {{"alice", note.value, OutputKind::transfer}};
                tx.memo = tag;
                tx.seal();
                sign_transaction(tx, {note}, {key});
                txs.push_back(tx);
                first = false;
            }
            c = append_block(c, txs, keys.get());
        }
        return c;
    };

    std::vector<Chain> chains;
    // The honest chain carries only empty blocks so each fork's spend is valid.
    Chain honest = extend(genesis, max_len, "");
    for (std::size_t len = 1; len <= max_len; ++len)
        chains.push_back(honest.prefix(len - 1));
    for (std::size_t k = 0; k + 1 < max_len; ++k)
        for (std::size_t len = k + 2; len <= max_len; ++len)
            chains.push_back(extend(honest.prefix(k), len, "fork-" + std::to_string(k)));

    // Every suffix window of every chain is a header view.
    std::vector<std::vector<BlockHeader>> views;
    for (const auto& c : chains) {
        auto hs = c.headers();
        for (std::size_t from = 0; from < hs.size(); ++from)
            views.emplace_back(hs.begin() + static_cast<std::ptrdiff_t>(from), hs.end());
    }
    auto sketch = [](const std::vector<BlockHeader>& hs) {
        oracle::ChainSketch s;
        for (const auto& h : hs)
            s.emplace_back(h.height, h.own_digest.hex());
        return s;
    };
    std::size_t pairs = 0, agree_true = 0;
    for (const auto& a : views)
        for (const auto& b : views) {
            ++pairs;
            bool want = oracle::consistent(sketch(a), sketch(b));
            bool got = check_consistency(a, b, bits);
            agree_true += want && got;
            if (want != got && o.detail.size() < 400)
                o.fail("disagree at tips " + std::to_string(a.back().height) + "/" + std::to_string(b.back().height));
            if (want != got)
                o.pass = false;
        }
    if (o.pass)
        o.detail = std::to_string(chains.size()) + " chains, " + std::to_string(pairs) + " view pairs (" +
                   std::to_string(agree_true) + " consistent)";
    return o;
}

// 5. Ghost collusion: caught on the observable service, not on the voting one.
Outcome collusion_asymmetry()
{
    Outcome o;
    auto social = run_scenario(scenario("collusion_social")).report;
    auto voting = run_scenario(scenario("collusion_voting")).report;
    auto ghost_rewards = [](const Report& r) {
        Amount sum;
        std::size_t ghosts = 0;
        for (const auto& s : r.campaigns.at(0).slots)
            if (s.ghost) {
                ++ghosts;
                sum += s.reward;
            }
        return std::pair{ghosts, sum};
    };
    auto [gs, social_paid] = ghost_rewards(social);
    auto [gv, voting_paid] = ghost_rewards(voting);
    if (gs == 0 || gv == 0)
        o.fail("no ghost slot was scheduled");
    if (social_paid != Amount{})
        o.fail("observable service paid ghosts " + social_paid.to_string());
    if (voting_paid <= Amount{})
        o.fail("voting service paid ghosts nothing");
    bool flagged = false;
    for (const auto& f : voting.campaigns.at(0).flags)
        flagged |= f.find("fairness violated") != std::string::npos;
    if (!flagged)
        o.fail("voting run raised no fairness-violation flag");
    for (const auto& f : social.campaigns.at(0).flags)
        if (f.find("fairness violated") != std::string::npos)
            o.fail("observable run flagged: " + f);
    if (o.pass)
        o.detail = "ghosts paid 0 on social, " + voting_paid.to_string() + " on voting";
    return o;
}

// 6. Gossip reaches every node within the diameter; partitions stay apart.
Outcome gossip_convergence()
{
    Outcome o;
    using namespace teevil::gossip;
    std::mt19937_64 rng(2024);
    auto name = [](int i) { return "if-" + std::to_string(i); };
    auto build = [&](int n, const std::vector<std::pair<int, int>>& edges) {
        Topology t;
        t.mode = Mode::distributed;
        for (int i = 0; i < n; ++i)
            t.add_node(name(i), attestation::EnclaveKind::interface);
        for (auto [a, b] : edges)
            t.add_edge(name(a), name(b));
        States s;
        for (int i = 0; i < n; ++i) {
            auto rec = std::make_shared<enclave::OwnerRecord>();
            rec->owner_id = "owner-" + std::to_string(i);
            s[name(i)].learn(rec, SimTime{0});
        }
        return std::pair{t, s};
    };
    int worst_slack = 1 << 30;
    for (int g = 0; g < 100; ++g) {
        int n = 2 + static_cast<int>(rng() % 19);
        std::vector<std::pair<int, int>> edges;
        for (int i = 1; i < n; ++i)
            edges.emplace_back(static_cast<int>(rng() % i), i);
        for (int extra = static_cast<int>(rng() % (n + 1)); extra > 0; --extra) {
            int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
            if (a != b)
                edges.emplace_back(a, b);
        }
        int d = oracle::diameter(n, edges);
        auto [t, s] = build(n, edges);
        for (int r = 0; r < d; ++r)
            s = gossip_round(t, s, static_cast<std::size_t>(n));
        for (const auto& [id, st] : s)
            if (st.known.size() != static_cast<std::size_t>(n)) {
                o.fail("graph " + std::to_string(g) + ": " + id + " knows " + std::to_string(st.known.size()) + "/" +
                       std::to_string(n) + " after " + std::to_string(d) + " rounds");
                break;
            }
        worst_slack = std::min(worst_slack, n - d);
    }
    for (int g = 0; g < 50; ++g) {
        int n = 4 + static_cast<int>(rng() % 17);
        int cut = 1 + static_cast<int>(rng() % (n - 1));
        std::vector<std::pair<int, int>> edges;
        for (int i = 1; i < n; ++i) {
            int lo = i < cut ? 0 : cut;
            if (i != lo)
                edges.emplace_back(lo + static_cast<int>(rng() % (i - lo)), i);
        }
        auto [t, s] = build(n, edges);
        for (int r = 0; r < n; ++r)
            s = gossip_round(t, s, static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            for (const auto& [owner, _] : s[name(i)].known) {
                int origin = std::stoi(owner.substr(6));
                if ((origin < cut) != (i < cut))
                    o.fail("partitioned graph " + std::to_string(g) + ": " + name(i) + " learned " + owner);
            }
    }
    if (o.pass)
        o.detail = "100 connected graphs within diameter, 50 partitioned graphs isolated";
    return o;
}

// 7. One CPU identity registers exactly one owner.
Outcome cpu_binding()
{
    Outcome o;
    auto r = run_scenario(scenario("p2p_cpu_flood")).report;
    if (!r.p2p)
        o.fail("no p2p section");
    else if (r.p2p->registrations != 100 || r.p2p->accepted != 1 || r.p2p->rejected != 99)
        o.fail(std::to_string(r.p2p->registrations) + " registrations, " + std::to_string(r.p2p->accepted) +
               " accepted");
    else
        o.detail = "100 registrations, 1 accepted";
    return o;
}

// 8. Every single-field mutation of a 10-header sequence is rejected.
Outcome header_mutations()
{
    Outcome o;
    using namespace teevil::ledger;
    constexpr unsigned bits = 8;
    auto keys = std::make_shared<KeyRegistry>();
    Chain c = Chain::make_genesis(bits, {{"alice", Amount::from_coins(1), OutputKind::issuance}}, 9);
    while (c.size() < 10)
        c = append_block(c, {}, keys.get());
    auto honest = c.headers();
    if (!verify_headers(honest, bits))
        o.fail("honest sequence rejected");

    auto flip = [](Digest d, std::size_t bit) {
        d.bytes[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        return d;
    };
    std::size_t mutations = 0;
    for (std::size_t i = 0; i < honest.size(); ++i) {
        std::vector<std::function<void(BlockHeader&)>> edits;
        for (std::uint64_t delta : {1ull, 2ull, 1ull << 40})
            edits.push_back([delta](BlockHeader& h) { h.height += delta; });
        edits.push_back([](BlockHeader& h) { h.height -= 1; });
        for (std::uint64_t delta : {1ull, 7ull, 1ull << 33})
            edits.push_back([delta](BlockHeader& h) { h.pow_nonce += delta; });
        for (std::size_t bit : {0u, 7u, 128u, 255u}) {
            edits.push_back([&, bit](BlockHeader& h) { h.prev_digest = flip(h.prev_digest, bit); });
            edits.push_back([&, bit](BlockHeader& h) { h.payload_digest = flip(h.payload_digest, bit); });
            edits.push_back([&, bit](BlockHeader& h) { h.own_digest = flip(h.own_digest, bit); });
        }
        for (const auto& edit : edits) {
            auto hs = honest;
            edit(hs[i]);
            ++mutations;
            if (verify_headers(hs, bits))
                o.fail("mutation of header " + std::to_string(i) + " accepted");
        }
    }
    if (o.pass)
        o.detail = std::to_string(mutations) + " mutations rejected, honest accepted";
    return o;
}

// 9. Twenty runs repeated give identical report and log digests.
Outcome determinism()
{
    Outcome o;
    std::vector<ScenarioConfig> cfgs;
    for (const auto& e : std::filesystem::directory_iterator(TEEVIL_SCENARIO_DIR))
        if (e.path().extension() == ".json")
            cfgs.push_back(load_scenario(e.path().string()));
    std::sort(cfgs.begin(), cfgs.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    for (std::uint64_t s = 1; cfgs.size() < 20; ++s) {
        auto base = scenario("baseline");
        base.adversary.clear();
        auto c = fuzz::perturb(base, 500 + s);
        c.name = "baseline_fuzz_" + std::to_string(s);
        cfgs.push_back(c);
    }
    cfgs.resize(20);
    std::vector<std::string> first(20), second(20);
    for (int pass = 0; pass < 2; ++pass)
        parallel_for(cfgs.size(), [&](std::size_t i) {
            auto out = run_scenario(cfgs[i]);
            (pass ? second : first)[i] = report_digest(out.report) + "/" + sha256(out.event_log).hex();
        });
    for (std::size_t i = 0; i < cfgs.size(); ++i)
        if (first[i] != second[i])
            o.fail(cfgs[i].name + " differs between runs");
    if (o.pass)
        o.detail = "20 scenarios, identical report and event-log digests";
    return o;
}

} // namespace

int main()
{
    struct Criterion {
        int id;
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {1, "replay timing", replay_timing},
        {2, "cut-point matrix", cut_matrix},
        {3, "deposit completeness fuzz", deposit_completeness},
        {4, "consistency oracle", consistency_oracle},
        {5, "collusion asymmetry", collusion_asymmetry},
        {6, "gossip convergence", gossip_convergence},
        {7, "p2p cpu binding", cpu_binding},
        {8, "header mutations", header_mutations},
        {9, "determinism", determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
