#include "simnet/simnet.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace teevil::simnet {

std::optional<CutPoint> cut_point_from_int(int id)
{
    if (id < 1 || id > 5)
        return std::nullopt;
    return static_cast<CutPoint>(id);
}

namespace {
constexpr std::pair<MsgKind, const char*> kind_names[] = {
    {MsgKind::campaign_start, "campaign_start"},
    {MsgKind::chain_query, "chain_query"},
    {MsgKind::owner_latest_block, "owner_latest_block"},
    {MsgKind::proxy_request, "proxy_request"},
    {MsgKind::service_request, "service_request"},
    {MsgKind::service_reply, "service_reply"},
    {MsgKind::service_response, "service_response"},
    {MsgKind::verify_request, "verify_request"},
    {MsgKind::verify_reply, "verify_reply"},
    {MsgKind::batch_dispatch, "batch_dispatch"},
    {MsgKind::batch_report, "batch_report"},
    {MsgKind::substitute_request, "substitute_request"},
    {MsgKind::substitute_reply, "substitute_reply"},
    {MsgKind::payment_instruction, "payment_instruction"},
    {MsgKind::payment_done, "payment_done"},
    {MsgKind::heartbeat, "heartbeat"},
    {MsgKind::rebalance_request, "rebalance_request"},
    {MsgKind::settlement_broadcast, "settlement_broadcast"},
    {MsgKind::settlement_to_renter, "settlement_to_renter"},
    {MsgKind::settlement_to_owner, "settlement_to_owner"},
    {MsgKind::tx_submit, "tx_submit"},
    {MsgKind::refund_broadcast, "refund_broadcast"},
    {MsgKind::refund_to_renter, "refund_to_renter"},
    {MsgKind::poll, "poll"},
    {MsgKind::gossip_batch, "gossip_batch"},
    {MsgKind::recovery_handoff, "recovery_handoff"},
};
} // namespace

std::string to_string(MsgKind kind)
{
    for (const auto& [k, name] : kind_names)
        if (k == kind)
            return name;
    return "?";
}

std::optional<MsgKind> msg_kind_from_string(const std::string& text)
{
    for (const auto& [k, name] : kind_names)
        if (text == name)
            return k;
    return std::nullopt;
}

std::optional<CutPoint> cut_point_of(MsgKind kind, int exchange, int pipeline_length)
{
    switch (kind) {
    case MsgKind::campaign_start: return CutPoint::renter_latest_block;
    case MsgKind::owner_latest_block: return CutPoint::owner_latest_block;
    case MsgKind::service_response:
        if (exchange == pipeline_length)
            return CutPoint::service_response;
        return std::nullopt;
    case MsgKind::settlement_to_renter: return CutPoint::deposit_copy_to_renter;
    case MsgKind::settlement_to_owner: return CutPoint::reward_copy_to_owner;
    default: return std::nullopt;
    }
}

bool MessageMatch::matches(const MessageView& view) const
{
    if (kind && *kind != view.kind())
        return false;
    if (cut_point && view.cut_point() != cut_point)
        return false;
    if (src && *src != view.src())
        return false;
    if (dst && *dst != view.dst())
        return false;
    if (owner && *owner != view.meta().owner)
        return false;
    if (campaign && *campaign != view.meta().campaign)
        return false;
    if (exchange && *exchange != view.meta().exchange)
        return false;
    return true;
}

Simnet::Simnet(std::uint64_t seed, int pipeline_length) : pipeline_length_(pipeline_length), rng_(seed) {}

void Simnet::register_actor(const ActorId& id, Handler handler) { handlers_[id] = std::move(handler); }

void Simnet::on_revive(const ActorId& id, std::function<void()> hook) { revive_hooks_[id] = std::move(hook); }

void Simnet::push(SimTime at, const ActorId& owner, std::function<void()> fn)
{
    queue_.push_back(Event{at, seq_++, owner, std::move(fn)});
    std::push_heap(queue_.begin(), queue_.end(), Later{});
}

void Simnet::schedule(Duration delay, const ActorId& owner, std::function<void()> fn)
{
    if (delay < Duration{0})
        delay = Duration{0};
    push(now_ + delay, owner, std::move(fn));
}

std::uint64_t Simnet::send(Message msg, Duration latency)
{
    if (!msg.src.empty() && !alive(msg.src))
        return 0;
    if (msg.carries_secret && msg.channel == Channel::plain)
        throw std::logic_error("secret-bearing message on a plain channel: " + to_string(msg.kind));
    msg.id = next_msg_id_++;
    msg.send_time = now_;

    MessageView view(msg, pipeline_length_);
    Duration total = latency < Duration{0} ? Duration{0} : latency;
    for (const auto& [id, rule] : rules_) {
        if (now_ < rule.active_from || now_ >= rule.active_until || !rule.match.matches(view))
            continue;
        if (rule.action == RuleAction::drop) {
            drops_.push_back(DropRecord{msg.id, id, rule.adversary, msg.kind, view.cut_point(), msg.meta, now_});
            std::ostringstream d;
            d << "msg=" << msg.id << " kind=" << to_string(msg.kind) << " src=" << msg.src << " dst=" << msg.dst
              << " rule=" << id << " adversary=" << rule.adversary;
            if (msg.meta.slot >= 0)
                d << " campaign=" << msg.meta.campaign << " slot=" << msg.meta.slot;
            log("net", "drop", d.str());
            return msg.id;
        }
        total += rule.delay;
    }
    push(now_ + total, "", [this, m = std::move(msg)]() { deliver(m); });
    return msg.id;
}

void Simnet::deliver(const Message& msg)
{
    auto handler = handlers_.find(msg.dst);
    std::ostringstream d;
    d << "msg=" << msg.id << " kind=" << to_string(msg.kind) << " src=" << msg.src;
    if (msg.meta.slot >= 0)
        d << " campaign=" << msg.meta.campaign << " slot=" << msg.meta.slot;
    if (handler == handlers_.end() || !alive(msg.dst)) {
        log(msg.dst, "lost", d.str());
        return;
    }
    ++delivered_;
    if (msg.carries_secret)
        secret_deliveries_.push_back(SecretDelivery{msg.id, msg.src, msg.dst, msg.channel});
    log(msg.dst, "recv", d.str());
    handler->second(msg);
}

RuleId Simnet::add_rule(NetRule rule)
{
    RuleId id = next_rule_id_++;
    rules_.emplace(id, std::move(rule));
    return id;
}

void Simnet::remove_rule(RuleId id) { rules_.erase(id); }

void Simnet::kill_at(const ActorId& id, SimTime at, const std::string& adversary)
{
    push(at, "", [this, id, adversary]() {
        if (dead_.insert(id).second) {
            kills_.push_back(KillRecord{id, adversary, now_});
            log(id, "killed", "adversary=" + adversary);
        }
    });
}

void Simnet::revive_at(const ActorId& id, SimTime at)
{
    push(at, "", [this, id]() {
        if (dead_.erase(id)) {
            log(id, "revived", "");
            if (auto it = revive_hooks_.find(id); it != revive_hooks_.end())
                it->second();
        }
    });
}

void Simnet::set_eclipse(const std::string& owner, std::shared_ptr<const ledger::Chain> chain,
                         const std::string& adversary)
{
    eclipses_[owner] = EclipseFeed{std::move(chain), adversary};
    log("net", "eclipse", "owner=" + owner + " adversary=" + adversary);
}

const EclipseFeed* Simnet::eclipse_feed(const std::string& owner) const
{
    auto it = eclipses_.find(owner);
    return it == eclipses_.end() ? nullptr : &it->second;
}

bool Simnet::step()
{
    if (queue_.empty())
        return false;
    std::pop_heap(queue_.begin(), queue_.end(), Later{});
    Event ev = std::move(queue_.back());
    queue_.pop_back();
    now_ = ev.time;
    if (ev.owner.empty() || alive(ev.owner))
        ev.fn();
    return true;
}

SimTime Simnet::next_event_time() const
{
    if (queue_.empty())
        return SimTime{std::numeric_limits<std::int64_t>::max()};
    return queue_.front().time;
}

double Simnet::normal(double mean, double stddev)
{
    if (stddev <= 0.0)
        return mean;
    std::normal_distribution<double> dist(mean, stddev);
    return dist(rng_);
}

std::uint64_t Simnet::uniform(std::uint64_t bound)
{
    if (bound == 0)
        return 0;
    std::uniform_int_distribution<std::uint64_t> dist(0, bound - 1);
    return dist(rng_);
}

void Simnet::log(const std::string& actor, const std::string& kind, const std::string& details)
{
    std::string line = std::to_string(now_.count());
    line += ' ';
    line += actor;
    line += ' ';
    line += kind;
    if (!details.empty()) {
        line += ' ';
        line += details;
    }
    log_.push_back(std::move(line));
}

std::string Simnet::event_log_text() const
{
    std::string out;
    for (const auto& line : log_) {
        out += line;
        out += '\n';
    }
    return out;
}

RuleId HostControls::drop(MessageMatch match, SimTime from, SimTime until)
{
    return net_.add_rule(NetRule{adversary_, std::move(match), RuleAction::drop, Duration{0}, from, until});
}

RuleId HostControls::delay(MessageMatch match, Duration extra, SimTime from, SimTime until)
{
    return net_.add_rule(NetRule{adversary_, std::move(match), RuleAction::delay, extra, from, until});
}

} // namespace teevil::simnet
