#include "simnet/simnet.hpp"

#include <doctest.h>

#include <string>
#include <vector>

using namespace teevil;
using namespace teevil::simnet;

namespace {

Message msg(const std::string& src, const std::string& dst, MsgKind kind, int exchange = 0)
{
    Message m;
    m.src = src;
    m.dst = dst;
    m.kind = kind;
    m.meta.exchange = exchange;
    return m;
}

void run(Simnet& net)
{
    while (net.step()) {
    }
}

} // namespace

TEST_CASE("cut points are exactly the five protocol messages")
{
    CHECK(cut_point_of(MsgKind::campaign_start, 0, 5) == CutPoint::renter_latest_block);
    CHECK(cut_point_of(MsgKind::owner_latest_block, 0, 5) == CutPoint::owner_latest_block);
    CHECK(cut_point_of(MsgKind::service_response, 5, 5) == CutPoint::service_response);
    CHECK_FALSE(cut_point_of(MsgKind::service_response, 4, 5));
    CHECK(cut_point_of(MsgKind::service_response, 3, 3) == CutPoint::service_response);
    CHECK(cut_point_of(MsgKind::settlement_to_renter, 0, 5) == CutPoint::deposit_copy_to_renter);
    CHECK(cut_point_of(MsgKind::settlement_to_owner, 0, 5) == CutPoint::reward_copy_to_owner);
    CHECK_FALSE(cut_point_of(MsgKind::settlement_broadcast, 0, 5));
    CHECK_FALSE(cut_point_of(MsgKind::heartbeat, 0, 5));
    CHECK_FALSE(cut_point_from_int(0));
    CHECK_FALSE(cut_point_from_int(6));
    CHECK(cut_point_from_int(3) == CutPoint::service_response);
}

TEST_CASE("message kind names round-trip")
{
    for (int k = 0; k <= static_cast<int>(MsgKind::recovery_handoff); ++k) {
        auto kind = static_cast<MsgKind>(k);
        CHECK(msg_kind_from_string(to_string(kind)) == kind);
    }
    CHECK_FALSE(msg_kind_from_string("nonsense"));
}

TEST_CASE("events run in time order, ties in scheduling order")
{
    Simnet net(1);
    std::vector<int> order;
    net.schedule(seconds(2), "", [&] { order.push_back(3); });
    net.schedule(seconds(1), "", [&] { order.push_back(1); });
    net.schedule(seconds(1), "", [&] { order.push_back(2); });
    run(net);
    CHECK(order == std::vector<int>{1, 2, 3});
    CHECK(net.now() == seconds(2));
}

TEST_CASE("delivery honours latency and delay rules; drops are logged")
{
    Simnet net(1);
    std::vector<std::pair<std::uint64_t, SimTime>> got;
    net.register_actor("b", [&](const Message& m) { got.emplace_back(m.id, net.now()); });
    net.register_actor("a", [](const Message&) {});

    MessageMatch slow;
    slow.kind = MsgKind::poll;
    net.add_rule(NetRule{"host", slow, RuleAction::delay, seconds(3)});
    MessageMatch cut;
    cut.cut_point = CutPoint::service_response;
    net.add_rule(NetRule{"host", cut, RuleAction::drop});

    auto m1 = net.send(msg("a", "b", MsgKind::heartbeat), seconds(1));
    auto m2 = net.send(msg("a", "b", MsgKind::poll), seconds(1));
    auto m3 = net.send(msg("a", "b", MsgKind::service_response, 5), seconds(1));
    auto m4 = net.send(msg("a", "b", MsgKind::service_response, 2), seconds(1));
    run(net);

    REQUIRE(got.size() == 3);
    CHECK(got[0] == std::pair{m1, SimTime(seconds(1))});
    CHECK(got[1] == std::pair{m4, SimTime(seconds(1))});
    CHECK(got[2] == std::pair{m2, SimTime(seconds(4))});
    REQUIRE(net.drops().size() == 1);
    CHECK(net.drops()[0].msg_id == m3);
    CHECK(net.drops()[0].adversary == "host");
    CHECK(net.drops()[0].cut_point == CutPoint::service_response);
    bool logged = false;
    for (const auto& line : net.event_log())
        logged |= line.find("net drop msg=" + std::to_string(m3) + " ") != std::string::npos;
    CHECK(logged);
}

TEST_CASE("rules only apply inside their active window")
{
    Simnet net(1);
    int got = 0;
    net.register_actor("b", [&](const Message&) { ++got; });
    MessageMatch any;
    net.add_rule(NetRule{"host", any, RuleAction::drop, Duration{0}, seconds(10), seconds(20)});
    net.send(msg("", "b", MsgKind::poll), Duration{0});
    net.schedule(seconds(15), "", [&] { net.send(msg("", "b", MsgKind::poll), Duration{0}); });
    net.schedule(seconds(20), "", [&] { net.send(msg("", "b", MsgKind::poll), Duration{0}); });
    run(net);
    CHECK(got == 2);
    CHECK(net.drops().size() == 1);
}

TEST_CASE("killed actors neither send, receive nor run timers; revive restores them")
{
    Simnet net(1);
    int received = 0;
    int timers = 0;
    int revived = 0;
    net.register_actor("b", [&](const Message&) { ++received; });
    net.on_revive("b", [&] { ++revived; });
    net.kill_at("b", seconds(1), "host");
    net.schedule(seconds(2), "b", [&] { ++timers; });
    net.schedule(seconds(2), "", [&] {
        CHECK(net.send(msg("b", "x", MsgKind::poll), Duration{0}) == 0);
        net.send(msg("", "b", MsgKind::poll), Duration{0});
    });
    net.revive_at("b", seconds(3));
    net.schedule(seconds(4), "b", [&] { ++timers; });
    net.schedule(seconds(4), "", [&] { net.send(msg("", "b", MsgKind::poll), Duration{0}); });
    run(net);
    CHECK(received == 1);
    CHECK(timers == 1);
    CHECK(revived == 1);
    REQUIRE(net.kills().size() == 1);
    CHECK(net.kills()[0].actor == "b");
    CHECK(net.kills()[0].time == seconds(1));
}

TEST_CASE("secrets never travel in the clear and encrypted payloads are opaque")
{
    Simnet net(1);
    net.register_actor("b", [](const Message&) {});
    Message m = msg("a", "b", MsgKind::proxy_request);
    m.carries_secret = true;
    CHECK_THROWS_AS(net.send(m, Duration{0}), std::logic_error);
    m.channel = Channel::service_tls;
    m.payload = std::string("pw");
    bool opaque = false;
    MessageView view(m, 5);
    opaque = view.plaintext_payload() == nullptr;
    CHECK(opaque);
    net.send(m, Duration{0});
    run(net);
    REQUIRE(net.secret_deliveries().size() == 1);
    CHECK(net.secret_deliveries()[0].channel == Channel::service_tls);
}

TEST_CASE("same seed, same randomness")
{
    Simnet a(99), b(99), c(100);
    std::vector<double> xa, xb, xc;
    for (int i = 0; i < 10; ++i) {
        xa.push_back(a.normal(1.0, 0.5));
        xb.push_back(b.normal(1.0, 0.5));
        xc.push_back(c.normal(1.0, 0.5));
    }
    CHECK(xa == xb);
    CHECK(xa != xc);
    CHECK(a.normal(3.0, 0.0) == 3.0);
}
