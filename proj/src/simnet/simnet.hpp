#pragma once

#include "common/time.hpp"
#include "ledger/chain.hpp"

#include <any>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace teevil::simnet {

using ActorId = std::string;

/// The five protocol messages an adversary can suppress.
enum class CutPoint : int {
    renter_latest_block = 1,
    owner_latest_block = 2,
    service_response = 3,
    deposit_copy_to_renter = 4,
    reward_copy_to_owner = 5,
};

std::optional<CutPoint> cut_point_from_int(int id);

enum class MsgKind {
    campaign_start,
    chain_query,
    owner_latest_block,
    proxy_request,
    service_request,
    service_reply,
    service_response,
    verify_request,
    verify_reply,
    batch_dispatch,
    batch_report,
    substitute_request,
    substitute_reply,
    payment_instruction,
    payment_done,
    heartbeat,
    rebalance_request,
    settlement_broadcast,
    settlement_to_renter,
    settlement_to_owner,
    tx_submit,
    refund_broadcast,
    refund_to_renter,
    poll,
    gossip_batch,
    recovery_handoff,
};

std::string to_string(MsgKind kind);
std::optional<MsgKind> msg_kind_from_string(const std::string& text);

/// How the payload travels. Anything but `plain` is end-to-end encrypted and
/// opaque to whoever relays it.
enum class Channel { plain, service_tls, attested };

/// Routing metadata, visible to the host even when the payload is not.
struct MessageMeta {
    std::string campaign;
    std::int64_t slot = -1;
    std::string owner;
    /// Pipeline exchange index (1-based) for service traffic, 0 otherwise.
    int exchange = 0;
};

struct Message {
    std::uint64_t id = 0;
    ActorId src;
    ActorId dst;
    MsgKind kind = MsgKind::heartbeat;
    Channel channel = Channel::plain;
    bool carries_secret = false;
    MessageMeta meta;
    std::any payload;
    SimTime send_time{0};
};

/// Which cut point, if any, a message is.
std::optional<CutPoint> cut_point_of(MsgKind kind, int exchange, int pipeline_length);

/// What an interception callback or rule may look at. There is deliberately
/// no payload accessor for encrypted channels.
class MessageView {
public:
    MessageView(const Message& msg, int pipeline_length) : msg_(msg), pipeline_length_(pipeline_length) {}

    std::uint64_t id() const { return msg_.id; }
    const ActorId& src() const { return msg_.src; }
    const ActorId& dst() const { return msg_.dst; }
    MsgKind kind() const { return msg_.kind; }
    Channel channel() const { return msg_.channel; }
    const MessageMeta& meta() const { return msg_.meta; }
    SimTime send_time() const { return msg_.send_time; }
    std::optional<CutPoint> cut_point() const { return cut_point_of(msg_.kind, msg_.meta.exchange, pipeline_length_); }
    /// nullptr unless the message travels in the clear.
    const std::any* plaintext_payload() const { return msg_.channel == Channel::plain ? &msg_.payload : nullptr; }

private:
    const Message& msg_;
    int pipeline_length_;
};

struct MessageMatch {
    std::optional<MsgKind> kind;
    std::optional<CutPoint> cut_point;
    std::optional<ActorId> src;
    std::optional<ActorId> dst;
    std::optional<std::string> owner;
    std::optional<std::string> campaign;
    std::optional<int> exchange;

    bool matches(const MessageView& view) const;
};

enum class RuleAction { drop, delay };

using RuleId = std::uint64_t;

struct NetRule {
    /// The actor the rule is attributed to in drop logs and verdicts.
    std::string adversary;
    MessageMatch match;
    RuleAction action = RuleAction::drop;
    Duration delay{0};
    SimTime active_from{0};
    SimTime active_until{std::numeric_limits<std::int64_t>::max()};
};

struct DropRecord {
    std::uint64_t msg_id = 0;
    RuleId rule = 0;
    std::string adversary;
    MsgKind kind = MsgKind::heartbeat;
    std::optional<CutPoint> cut_point;
    MessageMeta meta;
    SimTime time{0};
};

struct KillRecord {
    ActorId actor;
    std::string adversary;
    SimTime time{0};
};

struct EclipseFeed {
    std::shared_ptr<const ledger::Chain> chain;
    std::string adversary;
};

/// Deterministic discrete-event bus. Events are ordered by (time, sequence);
/// all randomness comes from one seeded generator, so a (scenario, seed) pair
/// always produces the same event log.
class Simnet {
public:
    using Handler = std::function<void(const Message&)>;

    explicit Simnet(std::uint64_t seed, int pipeline_length = 5);

    SimTime now() const { return now_; }

    void register_actor(const ActorId& id, Handler handler);
    void on_revive(const ActorId& id, std::function<void()> hook);
    bool alive(const ActorId& id) const { return !dead_.contains(id); }
    bool has_actor(const ActorId& id) const { return handlers_.contains(id); }

    /// Runs `fn` after `delay` unless `owner` is dead at that time. An empty
    /// owner means the event belongs to the simulation itself.
    void schedule(Duration delay, const ActorId& owner, std::function<void()> fn);

    /// Sends unless the source is dead; a matching drop rule suppresses
    /// delivery, delay rules add to `latency`. Throws std::logic_error if a
    /// secret-bearing payload would travel on a plain channel. Returns the
    /// message id (0 when the source is dead).
    std::uint64_t send(Message msg, Duration latency);

    RuleId add_rule(NetRule rule);
    void remove_rule(RuleId id);
    const std::map<RuleId, NetRule>& rules() const { return rules_; }

    void kill_at(const ActorId& id, SimTime at, const std::string& adversary);
    void revive_at(const ActorId& id, SimTime at);

    void set_eclipse(const std::string& owner, std::shared_ptr<const ledger::Chain> chain,
                     const std::string& adversary);
    const EclipseFeed* eclipse_feed(const std::string& owner) const;

    /// Processes the next event; false when the queue is empty.
    bool step();
    bool idle() const { return queue_.empty(); }
    SimTime next_event_time() const;

    double normal(double mean, double stddev);
    std::uint64_t uniform(std::uint64_t bound);
    std::mt19937_64& rng() { return rng_; }

    void log(const std::string& actor, const std::string& kind, const std::string& details);
    const std::vector<std::string>& event_log() const { return log_; }
    std::string event_log_text() const;

    const std::vector<DropRecord>& drops() const { return drops_; }
    const std::vector<KillRecord>& kills() const { return kills_; }
    std::uint64_t delivered() const { return delivered_; }
    /// Every delivered secret-bearing message, for taint scans.
    struct SecretDelivery {
        std::uint64_t msg_id;
        ActorId src;
        ActorId dst;
        Channel channel;
    };
    const std::vector<SecretDelivery>& secret_deliveries() const { return secret_deliveries_; }
    int pipeline_length() const { return pipeline_length_; }

private:
    struct Event {
        SimTime time;
        std::uint64_t seq;
        ActorId owner;
        std::function<void()> fn;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const
        {
            return a.time != b.time ? a.time > b.time : a.seq > b.seq;
        }
    };

    void push(SimTime at, const ActorId& owner, std::function<void()> fn);
    void deliver(const Message& msg);

    SimTime now_{0};
    std::uint64_t seq_ = 0;
    std::uint64_t next_msg_id_ = 1;
    RuleId next_rule_id_ = 1;
    int pipeline_length_;
    std::vector<Event> queue_;
    std::map<ActorId, Handler> handlers_;
    std::map<ActorId, std::function<void()>> revive_hooks_;
    std::set<ActorId> dead_;
    std::map<RuleId, NetRule> rules_;
    std::map<std::string, EclipseFeed> eclipses_;
    std::vector<DropRecord> drops_;
    std::vector<KillRecord> kills_;
    std::vector<std::string> log_;
    std::uint64_t delivered_ = 0;
    std::vector<SecretDelivery> secret_deliveries_;
    std::mt19937_64 rng_;
};

/// The host's powers over the network and the machines it runs: drop, delay,
/// kill, and feeding a chosen chain to an owner. Nothing here can read an
/// encrypted payload or touch enclave state.
class HostControls {
public:
    HostControls(Simnet& net, std::string adversary) : net_(net), adversary_(std::move(adversary)) {}

    RuleId drop(MessageMatch match, SimTime from = SimTime{0},
                SimTime until = SimTime{std::numeric_limits<std::int64_t>::max()});
    RuleId delay(MessageMatch match, Duration extra, SimTime from = SimTime{0},
                 SimTime until = SimTime{std::numeric_limits<std::int64_t>::max()});
    void clear(RuleId id) { net_.remove_rule(id); }
    void kill(const ActorId& actor, SimTime at) { net_.kill_at(actor, at, adversary_); }
    void eclipse(const std::string& owner, std::shared_ptr<const ledger::Chain> chain)
    {
        net_.set_eclipse(owner, std::move(chain), adversary_);
    }
    const std::string& adversary() const { return adversary_; }

private:
    Simnet& net_;
    std::string adversary_;
};

} // namespace teevil::simnet
