#include "enclave/service_enclave.hpp"

#include "common/error.hpp"
#include "services/voting_service.hpp"

namespace teevil::enclave {

using simnet::Channel;
using simnet::Message;
using simnet::MsgKind;

GateResult gate_owner_chain(const std::optional<std::vector<ledger::BlockHeader>>& owner_view,
                            const std::vector<ledger::BlockHeader>& renter_view, unsigned difficulty_bits)
{
    if (!owner_view)
        return GateResult::unreachable;
    try {
        return ledger::check_consistency(*owner_view, renter_view, difficulty_bits) ? GateResult::pass
                                                                                     : GateResult::inconsistent;
    } catch (const Error&) {
        return GateResult::inconsistent;
    }
}

bool verify_external(const services::MockService& service, const std::string& account, const ServiceAction& action)
{
    if (!action.observable())
        throw Error(ErrorCode::not_observable, services::to_string(action.kind));
    return service.publicly_visible(account, action);
}

ServiceEnclave::ServiceEnclave(Runtime& rt, attestation::EnclaveIdentity identity)
    : rt_(rt), identity_(std::move(identity))
{
}

Message ServiceEnclave::make(MsgKind kind, const std::string& dst, const Batch& b) const
{
    Message m;
    m.src = id();
    m.dst = dst;
    m.kind = kind;
    m.channel = Channel::attested;
    m.meta.campaign = b.dispatch.campaign_id;
    m.meta.slot = b.outcome.slot_id;
    m.meta.owner = b.current.owner_id;
    return m;
}

void ServiceEnclave::handle(const Message& m)
{
    switch (m.kind) {
    case MsgKind::batch_dispatch: {
        const auto& d = std::any_cast<const msg::BatchDispatch&>(m.payload);
        Batch b;
        b.dispatch = d;
        batches_[d.campaign_id] = std::move(b);
        rt_.net.log(id(), "batch", "campaign=" + d.campaign_id + " slots=" + std::to_string(d.slots.size()));
        if (!heartbeating_) {
            heartbeating_ = true;
            heartbeat_loop();
        }
        start_next(d.campaign_id);
        break;
    }
    case MsgKind::owner_latest_block: on_latest_block(m); break;
    case MsgKind::substitute_reply: on_substitute(m); break;
    case MsgKind::service_response: on_response(m); break;
    default: break;
    }
}

void ServiceEnclave::heartbeat_loop()
{
    if (batches_.empty()) {
        heartbeating_ = false;
        return;
    }
    std::map<std::string, std::vector<std::string>> by_interface;
    for (const auto& [cid, b] : batches_)
        by_interface[b.dispatch.interface_id].push_back(cid);
    for (auto& [iface, cids] : by_interface) {
        Message m;
        m.src = id();
        m.dst = iface;
        m.kind = MsgKind::heartbeat;
        m.channel = Channel::attested;
        m.payload = msg::Heartbeat{id(), cids};
        rt_.net.send(std::move(m), rt_.params.latency.link);
    }
    rt_.net.schedule(rt_.params.heartbeat_interval, id(), [this] { heartbeat_loop(); });
}

void ServiceEnclave::start_next(const std::string& campaign)
{
    Batch& b = batches_.at(campaign);
    if (b.next >= b.dispatch.slots.size()) {
        b.stage = Stage::done;
        maybe_report(campaign);
        return;
    }
    b.current = b.dispatch.slots[b.next++];
    b.outcome = msg::SlotOutcome{};
    b.outcome.slot_id = b.current.slot_id;
    b.outcome.owner_id = b.current.owner_id;
    b.outcome.price = b.current.price;
    b.outcome.started = rt_.net.now();
    begin_gate(b);
}

void ServiceEnclave::begin_gate(Batch& b)
{
    b.stage = Stage::gating;
    b.request_id = next_id_++;
    b.outcome.owner_id = b.current.owner_id;
    b.outcome.price = b.current.price;
    Message m = make(MsgKind::chain_query, b.current.proxy_actor, b);
    std::uint64_t from = b.dispatch.renter_view.empty() ? 0 : b.dispatch.renter_view.front().height;
    m.payload = msg::ChainQuery{from, b.request_id};
    rt_.net.send(std::move(m), rt_.params.latency.link);
    std::string cid = b.dispatch.campaign_id;
    std::uint64_t rid = b.request_id;
    rt_.net.schedule(rt_.params.gate_timeout, id(), [this, cid, rid] {
        auto it = batches_.find(cid);
        if (it != batches_.end() && it->second.stage == Stage::gating && it->second.request_id == rid)
            skip(it->second, SlotStatus::skipped_unreachable);
    });
}

void ServiceEnclave::on_latest_block(const Message& m)
{
    auto it = batches_.find(m.meta.campaign);
    if (it == batches_.end())
        return;
    Batch& b = it->second;
    const auto& reply = std::any_cast<const msg::LatestBlock&>(m.payload);
    if (b.stage != Stage::gating || reply.request_id != b.request_id)
        return;
    GateResult g = gate_owner_chain(reply.headers, b.dispatch.renter_view, rt_.params.difficulty_bits);
    if (g != GateResult::pass) {
        skip(b, SlotStatus::skipped_inconsistent);
        return;
    }
    b.outcome.owner_view = reply.headers;
    begin_pipeline(b);
}

void ServiceEnclave::skip(Batch& b, SlotStatus why)
{
    rt_.net.log(id(), "skip",
                "campaign=" + b.dispatch.campaign_id + " slot=" + std::to_string(b.outcome.slot_id) +
                    " owner=" + b.current.owner_id + " status=" + to_string(why));
    b.outcome.skipped.emplace_back(b.current.owner_id, why);
    b.stage = Stage::substituting;
    Message m = make(MsgKind::substitute_request, b.dispatch.interface_id, b);
    m.payload = msg::SubstituteRequest{b.dispatch.campaign_id, b.outcome.slot_id};
    rt_.net.send(std::move(m), rt_.params.latency.link);
}

void ServiceEnclave::on_substitute(const Message& m)
{
    const auto& reply = std::any_cast<const msg::SubstituteReply&>(m.payload);
    auto it = batches_.find(reply.campaign_id);
    if (it == batches_.end())
        return;
    Batch& b = it->second;
    if (b.stage != Stage::substituting || reply.slot_id != b.outcome.slot_id)
        return;
    if (reply.assignment) {
        b.current = *reply.assignment;
        begin_gate(b);
        return;
    }
    SlotStatus last = b.outcome.skipped.back().second;
    b.outcome.skipped.pop_back();
    finish_slot(b, last, "no substitute available");
}

void ServiceEnclave::begin_pipeline(Batch& b)
{
    b.stage = Stage::pipeline;
    b.token = next_id_++;
    b.service_pipeline = 0;
    b.outcome.pipeline_latency = Duration{0};
    std::string cid = b.dispatch.campaign_id;
    std::uint64_t token = b.token;
    rt_.net.schedule(rt_.params.effective_response_timeout(), id(), [this, cid, token] {
        auto it = batches_.find(cid);
        if (it != batches_.end() && it->second.stage == Stage::pipeline && it->second.token == token)
            finish_slot(it->second, SlotStatus::timeout, "no service response");
    });
    send_exchange(b, 1);
}

void ServiceEnclave::send_exchange(Batch& b, int exchange)
{
    Message m = make(MsgKind::service_request, b.current.proxy_actor, b);
    m.channel = Channel::service_tls;
    m.carries_secret = true;
    m.meta.exchange = exchange;
    msg::ServiceRequest req;
    req.token = b.token;
    req.exchange = exchange;
    req.pipeline = b.service_pipeline;
    req.credential = b.current.credential;
    req.action = b.dispatch.action;
    req.reply_to = id();
    m.payload = std::move(req);
    rt_.net.send(std::move(m), rt_.params.latency.link);
}

void ServiceEnclave::on_response(const Message& m)
{
    auto it = batches_.find(m.meta.campaign);
    if (it == batches_.end())
        return;
    Batch& b = it->second;
    const auto& reply = std::any_cast<const msg::ServiceReply&>(m.payload);
    if (b.stage != Stage::pipeline || reply.token != b.token)
        return;
    b.outcome.pipeline_latency += reply.latency;
    if (!reply.ok) {
        finish_slot(b, SlotStatus::failed, reply.error);
        return;
    }
    b.service_pipeline = reply.pipeline;
    if (reply.exchange < services::MockService::pipeline_length) {
        send_exchange(b, reply.exchange + 1);
        return;
    }
    on_performed(b);
}

void ServiceEnclave::on_performed(Batch& b)
{
    b.outcome.status = SlotStatus::performed;
    b.outcome.performed_at = rt_.net.now();
    rt_.net.log(id(), "performed",
                "campaign=" + b.dispatch.campaign_id + " slot=" + std::to_string(b.outcome.slot_id) +
                    " owner=" + b.current.owner_id);
    const services::MockService* svc = rt_.service(b.dispatch.service_id);
    const ServiceAction& action = b.dispatch.action;
    bool visible = false;
    if (action.observable() && svc)
        visible = verify_external(*svc, b.current.credential.account, action);

    if (b.dispatch.revert_window > Duration{0}) {
        ++b.open_windows;
        std::string cid = b.dispatch.campaign_id;
        msg::SlotOutcome outcome = b.outcome;
        std::string account = b.current.credential.account;
        rt_.net.schedule(b.dispatch.revert_window, id(), [this, cid, outcome, visible, account] {
            close_window(cid, outcome, visible, account);
        });
        b.stage = Stage::idle;
        start_next(cid);
        return;
    }
    if (action.observable()) {
        if (visible)
            finish_slot(b, SlotStatus::confirmed);
        else
            finish_slot(b, SlotStatus::failed, "confirmation not externally visible");
    } else {
        b.outcome.unverifiable = true;
        finish_slot(b, SlotStatus::confirmed);
    }
}

void ServiceEnclave::close_window(const std::string& campaign, msg::SlotOutcome outcome, bool visible_at_perform,
                                  const std::string& account)
{
    auto it = batches_.find(campaign);
    if (it == batches_.end())
        return;
    Batch& b = it->second;
    --b.open_windows;
    const services::MockService* svc = rt_.service(b.dispatch.service_id);
    const ServiceAction& action = b.dispatch.action;
    SlotStatus status = SlotStatus::confirmed;
    if (action.observable()) {
        if (!visible_at_perform) {
            status = SlotStatus::failed;
            outcome.failure = "confirmation not externally visible";
        } else if (!verify_external(*svc, account, action)) {
            status = SlotStatus::reverted;
        }
    } else {
        outcome.unverifiable = true;
        const auto* voting = dynamic_cast<const services::VotingService*>(svc);
        if (voting && voting->policy() == services::VotePolicy::last_counts &&
            !voting->verify_ballot(account, action.target))
            status = SlotStatus::reverted;
    }
    outcome.status = status;
    outcome.finished = rt_.net.now();
    rt_.net.log(id(), "slot",
                "campaign=" + campaign + " slot=" + std::to_string(outcome.slot_id) + " owner=" + outcome.owner_id +
                    " status=" + to_string(status));
    b.finished.push_back(std::move(outcome));
    maybe_report(campaign);
}

void ServiceEnclave::finish_slot(Batch& b, SlotStatus status, std::string failure)
{
    b.outcome.status = status;
    b.outcome.finished = rt_.net.now();
    b.outcome.failure = std::move(failure);
    rt_.net.log(id(), "slot",
                "campaign=" + b.dispatch.campaign_id + " slot=" + std::to_string(b.outcome.slot_id) +
                    " owner=" + b.outcome.owner_id + " status=" + to_string(status));
    b.finished.push_back(b.outcome);
    b.stage = Stage::idle;
    start_next(b.dispatch.campaign_id);
}

void ServiceEnclave::maybe_report(const std::string& campaign)
{
    auto it = batches_.find(campaign);
    if (it == batches_.end())
        return;
    Batch& b = it->second;
    if (b.stage != Stage::done || b.open_windows > 0)
        return;
    Message m;
    m.src = id();
    m.dst = b.dispatch.interface_id;
    m.kind = MsgKind::batch_report;
    m.channel = Channel::attested;
    m.meta.campaign = campaign;
    m.payload = msg::BatchReport{campaign, id(), std::move(b.finished)};
    batches_.erase(it);
    rt_.net.send(std::move(m), rt_.params.latency.link);
}

} // namespace teevil::enclave
