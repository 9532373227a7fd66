#include "common/error.hpp"
#include "gossip/gossip.hpp"
#include "gossip/p2p.hpp"
#include "oracles.hpp"
#include "services/social_service.hpp"

#include <doctest.h>

#include <random>

using namespace teevil;
using namespace teevil::gossip;
using attestation::EnclaveKind;

namespace {

std::string name(int i) { return "if-" + std::to_string(i); }

Topology interface_graph(int n, const std::vector<std::pair<int, int>>& edges)
{
    Topology t;
    t.mode = Mode::distributed;
    for (int i = 0; i < n; ++i)
        t.add_node(name(i), EnclaveKind::interface);
    for (auto [a, b] : edges)
        t.add_edge(name(a), name(b));
    return t;
}

States seeded_states(int n)
{
    States s;
    for (int i = 0; i < n; ++i) {
        auto rec = std::make_shared<enclave::OwnerRecord>();
        rec->owner_id = "owner-" + std::to_string(i);
        s[name(i)].learn(rec, SimTime{0});
    }
    return s;
}

int rounds_to_converge(const Topology& t, States s, int n, int limit)
{
    for (int r = 0; r <= limit; ++r) {
        bool done = true;
        for (const auto& [_, st] : s)
            done &= st.known.size() == static_cast<std::size_t>(n);
        if (done)
            return r;
        s = gossip_round(t, s, static_cast<std::size_t>(n));
    }
    return -1;
}

} // namespace

TEST_CASE("learn keeps the highest version")
{
    NodeState st;
    auto v1 = std::make_shared<enclave::OwnerRecord>();
    v1->owner_id = "o";
    auto v2 = std::make_shared<enclave::OwnerRecord>(*v1);
    v2->version = 2;
    CHECK(st.learn(v2, SimTime{0}));
    CHECK_FALSE(st.learn(v1, SimTime{0}));
    CHECK(st.known.at("o")->version == 2);
    CHECK(st.take_batch(10).size() == 1);
    CHECK(st.take_batch(10).empty());
}

TEST_CASE("a line converges in exactly its diameter")
{
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < 6; ++i)
        edges.emplace_back(i, i + 1);
    auto t = interface_graph(6, edges);
    CHECK(rounds_to_converge(t, seeded_states(6), 6, 20) == oracle::diameter(6, edges));
}

TEST_CASE("random connected graphs converge within the diameter")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 2 + static_cast<int>(rng() % 12);
        std::vector<std::pair<int, int>> edges;
        for (int i = 1; i < n; ++i)
            edges.emplace_back(static_cast<int>(rng() % i), i);
        for (int extra = static_cast<int>(rng() % 4); extra > 0; --extra) {
            int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
            if (a != b)
                edges.emplace_back(a, b);
        }
        auto t = interface_graph(n, edges);
        int d = oracle::diameter(n, edges);
        int r = rounds_to_converge(t, seeded_states(n), n, 3 * n);
        CHECK(r >= 0);
        CHECK(r <= d);
    }
}

TEST_CASE("a partition never leaks records")
{
    auto t = interface_graph(4, {{0, 1}, {2, 3}});
    auto s = seeded_states(4);
    for (int r = 0; r < 10; ++r)
        s = gossip_round(t, s, 10);
    CHECK(s[name(0)].known.size() == 2);
    CHECK(s[name(0)].known.contains("owner-1"));
    CHECK_FALSE(s[name(0)].known.contains("owner-2"));
    CHECK(s[name(3)].known.size() == 2);
}

TEST_CASE("gossip only travels between peers of the same kind")
{
    Topology t;
    t.mode = Mode::distributed;
    t.add_node("a", EnclaveKind::interface);
    t.add_node("svc", EnclaveKind::service);
    t.add_node("b", EnclaveKind::interface);
    t.add_edge("a", "svc");
    t.add_edge("svc", "b");
    CHECK(t.peer_neighbors("a").empty());
    CHECK(t.neighbors("svc") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("topology validation")
{
    Topology t;
    t.mode = Mode::distributed;
    t.add_node("i", EnclaveKind::interface);
    t.add_node("s", EnclaveKind::service);
    t.add_edge("i", "s");
    CHECK_THROWS_AS(validate_topology(t), Error);
    t.add_node("p", EnclaveKind::payment);
    t.add_edge("i", "p");
    CHECK_NOTHROW(validate_topology(t));
    t.add_edge("i", "nowhere");
    CHECK_THROWS_AS(validate_topology(t), Error);

    Topology loop;
    loop.add_node("i", EnclaveKind::interface);
    loop.add_edge("i", "i");
    CHECK_THROWS_AS(validate_topology(loop), Error);

    Topology p2p;
    p2p.mode = Mode::p2p;
    p2p.add_node("n", EnclaveKind::interface);
    CHECK_THROWS_AS(validate_topology(p2p), Error);
    CHECK(mode_from_string("p2p") == Mode::p2p);
    CHECK_FALSE(mode_from_string("mesh"));
}

TEST_CASE("one owner per CPU across the network")
{
    Topology t;
    t.mode = Mode::p2p;
    for (int i = 0; i < 3; ++i)
        t.add_node("n" + std::to_string(i), EnclaveKind::combined);
    P2PNetwork net(t);
    for (int i = 0; i < 3; ++i)
        net.add_node({"n" + std::to_string(i), "", "ep" + std::to_string(i), std::nullopt, {}});
    CHECK(net.register_owner("n0", "alice", "cpu-1") == Registration::accepted);
    CHECK(net.register_owner("n0", "alice", "cpu-1") == Registration::already_registered);
    try {
        net.register_owner("n1", "mallory", "cpu-1");
        FAIL("expected cpu_already_bound");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::cpu_already_bound);
    }
    CHECK(net.register_owner("n1", "bob", "cpu-2") == Registration::accepted);
    CHECK(net.registered_owners() == 2);
    CHECK_THROWS_AS(net.register_owner("n9", "carol", "cpu-3"), Error);
}

TEST_CASE("p2p campaigns flood once and act from the owner's endpoint")
{
    Topology t;
    t.mode = Mode::p2p;
    for (int i = 0; i < 4; ++i)
        t.add_node("n" + std::to_string(i), EnclaveKind::combined);
    t.add_edge("n0", "n1");
    t.add_edge("n1", "n2");
    t.add_edge("n2", "n0");
    t.add_edge("n2", "n3");
    P2PNetwork net(t);
    services::SocialService forum("forum");
    forum.create_item("post-1");
    for (int i = 0; i < 4; ++i) {
        std::string id = "n" + std::to_string(i), owner = "o" + std::to_string(i);
        net.add_node({id, "", "ep-" + owner, std::nullopt, {}});
        net.register_owner(id, owner, "cpu-" + owner);
        forum.add_account(owner, "pw");
        enclave::Policy p{"forum", {services::ActionKind::upvote}, {}, Amount::from_coins(1)};
        net.delegate(id, {{"forum", owner, "pw"}, p});
    }
    P2PCampaign c{"c1", "forum", {services::ActionKind::upvote, "post-1", ""}, 3, Duration{0}};
    auto out = net.broadcast_campaign("n0", c, {{"forum", &forum}});
    CHECK(out.reached.size() == 4);
    CHECK(out.fulfilled.size() == 3);
    CHECK(out.refunded_slots == 0);
    CHECK(forum.observe("post-1") == 3);
    for (const auto& r : forum.request_log())
        CHECK(r.source == "ep-" + r.account);
    // A second broadcast of the same id is dropped at the entry node.
    CHECK_THROWS_AS(net.broadcast_campaign("n0", c, {{"forum", &forum}}), Error);
    CHECK(forum.observe("post-1") == 3);
}
