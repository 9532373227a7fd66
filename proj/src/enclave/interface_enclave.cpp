#include "enclave/interface_enclave.hpp"

#include "common/error.hpp"

#include <algorithm>

namespace teevil::enclave {

using simnet::Channel;
using simnet::Message;
using simnet::MsgKind;

InterfaceEnclave::InterfaceEnclave(Runtime& rt, attestation::EnclaveIdentity identity)
    : rt_(rt), identity_(std::move(identity))
{
}

void InterfaceEnclave::attach(ServiceEnclave& service)
{
    rt_.mesh.enlist(id(), service.id());
    services_.push_back(&service);
}

void InterfaceEnclave::attach(PaymentEnclave& payment)
{
    rt_.mesh.enlist(id(), payment.id());
    payments_.push_back(&payment);
}

void InterfaceEnclave::send(MsgKind kind, const std::string& dst, std::any payload, const std::string& campaign,
                            std::int64_t slot)
{
    Message m;
    m.src = id();
    m.dst = dst;
    m.kind = kind;
    m.channel = Channel::attested;
    m.meta.campaign = campaign;
    m.meta.slot = slot;
    m.payload = std::move(payload);
    rt_.net.send(std::move(m), rt_.params.latency.link);
}

std::string InterfaceEnclave::enroll_owner(const EnrollmentRequest& request, const ProxyEcho& echo)
{
    if (!rt_.mesh.has_session(request.owner_id, id()))
        throw Error(ErrorCode::measurement_mismatch, "no attested session with " + request.owner_id);
    Hasher h;
    h.add(std::string_view("teevil/nonce")).add(id()).add(request.owner_id).add_u64(++nonce_counter_).add_u64(rt_.seed);
    Digest nonce = h.finish();
    if (!echo(request.proxy_actor, nonce))
        throw Error(ErrorCode::proxy_unreachable, request.owner_id);

    OwnerRecord rec;
    if (auto it = owners_.find(request.owner_id); it != owners_.end())
        rec.version = it->second.version + 1;
    rec.owner_id = request.owner_id;
    rec.payout_address = request.payout_address;
    rec.proxy_actor = request.proxy_actor;
    rec.proxy_endpoint = request.proxy_endpoint;
    rec.last_poll = rt_.net.now();
    rec.home_interface = id();
    std::optional<std::string> bad;
    for (const auto& e : request.services) {
        validate_policy(e.policy);
        const services::MockService* svc = rt_.service(e.credential.service_id);
        if (!svc || !svc->test_login(e.credential) || e.policy.service_id != e.credential.service_id) {
            if (!bad)
                bad = e.credential.service_id;
            continue;
        }
        rec.services[e.credential.service_id] = e;
    }
    if (!rec.services.empty()) {
        // A re-enrollment elsewhere supersedes any gossiped copy.
        if (auto known = gossip_.known.find(rec.owner_id); known != gossip_.known.end())
            rec.version = std::max(rec.version, known->second->version + 1);
        owners_[rec.owner_id] = rec;
        gossip_.learn(std::make_shared<const OwnerRecord>(rec), rt_.net.now());
        rt_.net.log(id(), "enroll", "owner=" + rec.owner_id + " services=" + std::to_string(rec.services.size()));
    }
    if (bad)
        throw Error(ErrorCode::bad_credentials, *bad);
    return rec.owner_id;
}

const OwnerRecord* InterfaceEnclave::owner(const std::string& owner_id) const
{
    if (auto it = owners_.find(owner_id); it != owners_.end())
        return &it->second;
    if (auto it = gossip_.known.find(owner_id); it != gossip_.known.end())
        return it->second.get();
    return nullptr;
}

std::vector<const OwnerRecord*> InterfaceEnclave::known_owners() const
{
    std::vector<const OwnerRecord*> out;
    for (const auto& [oid, rec] : owners_)
        out.push_back(&rec);
    for (const auto& [oid, rec] : gossip_.known)
        if (!owners_.contains(oid))
            out.push_back(rec.get());
    return out;
}

std::vector<CompliantAccount> InterfaceEnclave::compliant_for(const std::string& service_id, const ServiceAction& action,
                                                              Duration revert_window,
                                                              const std::vector<std::string>* only) const
{
    std::vector<const OwnerRecord*> pool;
    std::vector<OwnerRecord> remote;
    remote.reserve(gossip_.known.size());
    for (const OwnerRecord* o : known_owners()) {
        if (only && !std::binary_search(only->begin(), only->end(), o->owner_id))
            continue;
        if (o->home_interface != id()) {
            // Remote owners poll their home node; their gossiped record is
            // taken as fresh.
            remote.push_back(*o);
            remote.back().last_poll = rt_.net.now();
            continue;
        }
        pool.push_back(o);
    }
    for (const auto& r : remote)
        pool.push_back(&r);
    return enclave::select_compliant(pool, service_id, action, revert_window, rt_.net.now(), rt_.params.poll_interval);
}

Quote InterfaceEnclave::quote_campaign(const std::string& campaign_id, const std::string& service_id,
                                       const ServiceAction& action, std::size_t count, Duration revert_window)
{
    auto compliant = compliant_for(service_id, action, revert_window, nullptr);
    std::vector<Amount> prices;
    std::vector<std::string> eligible;
    for (const auto& c : compliant) {
        prices.push_back(c.price);
        eligible.push_back(c.owner_id);
    }
    Quote q = quote_from_prices(prices, count, rt_.params.deposit_rate);
    std::sort(eligible.begin(), eligible.end());
    quotes_[campaign_id] = QuoteSnapshot{q, std::move(eligible)};
    return q;
}

std::string InterfaceEnclave::funding_address(const std::string& campaign_id)
{
    std::string address = "fund-" + id() + "-" + campaign_id;
    if (!funding_keys_.contains(campaign_id)) {
        Hasher h;
        h.add(std::string_view("teevil/funding-key")).add(address).add_u64(rt_.seed);
        Digest d = h.finish();
        std::uint64_t seed = 0;
        for (int i = 0; i < 8; ++i)
            seed = (seed << 8) | d.bytes[i];
        funding_keys_[campaign_id] = rt_.keys->create(address, seed);
    }
    return address;
}

std::vector<CompliantAccount> InterfaceEnclave::select_compliant(const Campaign& c) const
{
    auto snap = quotes_.find(c.spec.campaign_id);
    return compliant_for(c.spec.service_id, c.spec.action, c.spec.revert_window,
                         snap == quotes_.end() ? nullptr : &snap->second.eligible);
}

msg::SlotAssignment InterfaceEnclave::assignment_for(const Campaign& c, std::int64_t slot,
                                                     const std::string& owner_id) const
{
    const OwnerRecord* o = owner(owner_id);
    const ServiceEnrollment& e = o->services.at(c.spec.service_id);
    return msg::SlotAssignment{slot, owner_id, o->proxy_actor, o->proxy_endpoint, e.credential, e.policy.price_per_action};
}

std::string InterfaceEnclave::start_campaign(const CampaignSpec& spec)
{
    const std::string& cid = spec.campaign_id;
    if (campaigns_.contains(cid))
        throw Error(ErrorCode::unverified_funding, cid + ": campaign already started");
    auto unverified = [&](const std::string& why) { return Error(ErrorCode::unverified_funding, cid + ": " + why); };

    ledger::HeaderCheck hc = ledger::verify_headers(spec.renter_chain_view, rt_.params.difficulty_bits);
    if (!hc.ok)
        throw unverified("renter chain view invalid: " + hc.reason);
    const ledger::Transaction& ftx = spec.funding_tx;
    if (ftx.compute_id() != ftx.tx_id)
        throw unverified("funding transaction id mismatch");
    std::uint64_t depth = ledger::confirmations_in_view(spec.renter_chain_view, ftx.tx_id, spec.funding_proof);
    if (depth == 0)
        throw unverified("funding transaction not in view");
    if (depth < rt_.params.confirmations)
        throw unverified("funding has " + std::to_string(depth) + " confirmations, need " +
                         std::to_string(rt_.params.confirmations));

    std::string address = funding_address(cid);
    std::optional<ledger::Note> funds;
    for (std::uint32_t i = 0; i < ftx.outputs.size(); ++i)
        if (ftx.outputs[i].address == address && (!funds || ftx.outputs[i].value > funds->value))
            funds = ftx.output_note(i);
    if (!funds)
        throw unverified("funding transaction does not pay " + address);

    if (!quotes_.contains(cid))
        quote_campaign(cid, spec.service_id, spec.action, spec.count, spec.revert_window);
    const Quote& quote = quotes_.at(cid).quote;
    if (funds->value < quote.total())
        throw unverified("funding " + funds->value.to_string() + " below quote " + quote.total().to_string());
    if (payments_.empty())
        throw Error(ErrorCode::no_payment_enclaves, cid);
    if (services_.empty())
        throw Error(ErrorCode::no_service_enclaves, cid);

    Campaign c;
    c.spec = spec;
    c.interface_id = id();
    c.quote = quote;
    c.status = CampaignStatus::funded;
    c.started_at = rt_.net.now();
    c.schedule = plan_schedule(quote, payments_.size());

    auto compliant = select_compliant(c);
    std::size_t k = quote.slots();
    for (std::size_t i = 0; i < k; ++i) {
        ActionRecord r;
        r.slot_id = static_cast<std::int64_t>(i);
        if (i < compliant.size()) {
            r.owner_id = compliant[i].owner_id;
            r.price = compliant[i].price;
            c.used_owners.insert(r.owner_id);
        } else {
            r.status = SlotStatus::skipped_unreachable;
            r.failure = "no compliant account";
        }
        c.slots.push_back(std::move(r));
    }
    for (std::size_t i = k; i < compliant.size(); ++i)
        c.substitutes.push_back(compliant[i].owner_id);

    // Shares: one key per payment enclave, escrowed with this interface.
    std::vector<std::string> addresses;
    std::vector<Amount> values;
    std::vector<std::string> peers;
    for (std::size_t j = 0; j < c.schedule.shares.size(); ++j) {
        PaymentEnclave& pe = *payments_[j];
        ledger::SpendKey key = pe.open_share(cid, j);
        rt_.mesh.backup_keys(pe.id(), id(), key);
        ShareState s;
        s.payment_enclave = pe.id();
        s.address = key.address;
        s.value = c.schedule.shares[j].value;
        s.entries = c.schedule.shares[j].entries;
        s.last_heartbeat = rt_.net.now();
        c.shares.push_back(s);
        addresses.push_back(key.address);
        values.push_back(s.value);
        peers.push_back(pe.id());
    }
    auto [split, fund_shares] =
        split_funds(*funds, funding_keys_.at(cid), addresses, values, spec.renter_refund_address, cid + "/split");
    c.split_tx_id = split.tx_id;
    for (std::size_t j = 0; j < fund_shares.size(); ++j)
        payments_[j]->bind_share(cid, j, fund_shares[j].note, fund_shares[j].value, id(), spec.renter_id,
                                 spec.renter_refund_address, peers);

    Message bm;
    bm.src = id();
    bm.dst = ledger_actor;
    bm.kind = MsgKind::tx_submit;
    bm.meta.campaign = cid;
    bm.payload = msg::TxCopy{split, cid, -1};
    rt_.net.send(bm, rt_.params.latency.link);
    bm.dst = spec.renter_id;
    bm.kind = MsgKind::refund_to_renter;
    bm.channel = Channel::attested;
    rt_.net.send(std::move(bm), rt_.params.latency.link);

    c.status = CampaignStatus::running;
    auto& stored = campaigns_[cid] = std::move(c);
    rt_.net.log(id(), "start",
                "campaign=" + cid + " slots=" + std::to_string(k) + " funds=" + quote.funds_upper_bound.to_string() +
                    " deposit=" + quote.deposit_required.to_string());
    dispatch(stored);
    watch(cid);
    return cid;
}

void InterfaceEnclave::dispatch(Campaign& c)
{
    std::vector<std::int64_t> live;
    for (const auto& s : c.slots)
        if (s.status == SlotStatus::pending)
            live.push_back(s.slot_id);
    c.dispatched_at = rt_.net.now();
    auto parts = partition_round_robin(live.size(), services_.size());
    for (std::size_t e = 0; e < parts.size(); ++e) {
        if (parts[e].empty())
            continue;
        ServiceEnclave& se = *services_[e];
        msg::BatchDispatch d;
        d.campaign_id = c.spec.campaign_id;
        d.interface_id = id();
        d.service_id = c.spec.service_id;
        d.action = c.spec.action;
        d.revert_window = c.spec.revert_window;
        d.renter_view = c.spec.renter_chain_view;
        for (std::size_t idx : parts[e]) {
            auto& slot = c.slots[static_cast<std::size_t>(live[idx])];
            slot.service_enclave = se.id();
            d.slots.push_back(assignment_for(c, slot.slot_id, slot.owner_id));
        }
        c.outstanding_batches.insert(se.id());
        c.service_heartbeat[se.id()] = rt_.net.now();
        Message m;
        m.src = id();
        m.dst = se.id();
        m.kind = MsgKind::batch_dispatch;
        m.channel = Channel::attested;
        m.carries_secret = true;
        m.meta.campaign = c.spec.campaign_id;
        m.payload = std::move(d);
        rt_.net.send(std::move(m), rt_.params.latency.link);
    }
    if (c.outstanding_batches.empty()) {
        c.service_done_at = rt_.net.now();
        begin_payment(c);
    }
}

void InterfaceEnclave::handle(const Message& m)
{
    switch (m.kind) {
    case MsgKind::campaign_start: {
        const auto& start = std::any_cast<const msg::CampaignStart&>(m.payload);
        try {
            start_campaign(start.spec);
        } catch (const Error& e) {
            rejected_.push_back(RejectedStart{start.spec.campaign_id, e.what(), rt_.net.now()});
            rt_.net.log(id(), "reject", "campaign=" + start.spec.campaign_id + " code=" + std::string(to_string(e.code())));
        }
        break;
    }
    case MsgKind::poll: {
        const auto& p = std::any_cast<const msg::Poll&>(m.payload);
        auto it = owners_.find(p.owner_id);
        if (it == owners_.end())
            break;
        it->second.last_poll = rt_.net.now();
        if (it->second.proxy_endpoint != p.proxy_endpoint) {
            it->second.proxy_endpoint = p.proxy_endpoint;
            ++it->second.version;
            gossip_.learn(std::make_shared<const OwnerRecord>(it->second), rt_.net.now());
        }
        send(MsgKind::poll, m.src, msg::PollAck{id()});
        break;
    }
    case MsgKind::heartbeat: {
        const auto& hb = std::any_cast<const msg::Heartbeat&>(m.payload);
        for (const auto& cid : hb.campaigns) {
            auto it = campaigns_.find(cid);
            if (it == campaigns_.end())
                continue;
            Campaign& c = it->second;
            if (c.service_heartbeat.contains(hb.enclave_id))
                c.service_heartbeat[hb.enclave_id] = rt_.net.now();
            for (auto& s : c.shares)
                if (s.payment_enclave == hb.enclave_id)
                    s.last_heartbeat = rt_.net.now();
        }
        send(MsgKind::heartbeat, m.src, msg::HeartbeatAck{id()});
        break;
    }
    case MsgKind::substitute_request: {
        const auto& req = std::any_cast<const msg::SubstituteRequest&>(m.payload);
        msg::SubstituteReply reply{req.campaign_id, req.slot_id, std::nullopt};
        auto it = campaigns_.find(req.campaign_id);
        if (it != campaigns_.end()) {
            Campaign& c = it->second;
            auto fresh = select_compliant(c);
            std::set<std::string> fresh_ids;
            for (const auto& a : fresh)
                fresh_ids.insert(a.owner_id);
            while (!c.substitutes.empty()) {
                std::string next = c.substitutes.front();
                c.substitutes.erase(c.substitutes.begin());
                if (!fresh_ids.contains(next) || c.used_owners.contains(next))
                    continue;
                c.used_owners.insert(next);
                reply.assignment = assignment_for(c, req.slot_id, next);
                break;
            }
        }
        send(MsgKind::substitute_reply, m.src, std::move(reply), req.campaign_id, req.slot_id);
        break;
    }
    case MsgKind::batch_report: on_batch_report(std::any_cast<const msg::BatchReport&>(m.payload)); break;
    case MsgKind::payment_done: on_payment_done(std::any_cast<const msg::PaymentDone&>(m.payload)); break;
    case MsgKind::rebalance_request: {
        auto it = campaigns_.find(m.meta.campaign);
        if (it != campaigns_.end())
            it->second.flags.push_back("insufficient share for slot " + std::to_string(m.meta.slot));
        break;
    }
    case MsgKind::recovery_handoff: on_handoff(std::any_cast<const msg::RecoveryHandoff&>(m.payload)); break;
    case MsgKind::gossip_batch: {
        const auto& batch = std::any_cast<const std::vector<gossip::RecordPtr>&>(m.payload);
        for (const auto& rec : batch)
            if (!owners_.contains(rec->owner_id) || owners_.at(rec->owner_id).version < rec->version) {
                if (owners_.contains(rec->owner_id))
                    owners_.erase(rec->owner_id);
                gossip_.learn(rec, rt_.net.now());
            }
        break;
    }
    default: break;
    }
}

void InterfaceEnclave::gossip_tick()
{
    auto batch = gossip_.take_batch(rt_.params.gossip_batch);
    if (batch.empty())
        return;
    for (const auto& peer : peers_) {
        Message m;
        m.src = id();
        m.dst = peer;
        m.kind = MsgKind::gossip_batch;
        m.channel = Channel::attested;
        m.carries_secret = true;
        m.payload = batch;
        rt_.net.send(std::move(m), rt_.params.latency.link);
    }
}

void InterfaceEnclave::on_batch_report(const msg::BatchReport& report)
{
    auto it = campaigns_.find(report.campaign_id);
    if (it == campaigns_.end())
        return;
    Campaign& c = it->second;
    if (!c.outstanding_batches.erase(report.service_enclave))
        return;
    for (const auto& o : report.outcomes) {
        auto& slot = c.slots.at(static_cast<std::size_t>(o.slot_id));
        slot.owner_id = o.owner_id;
        slot.price = o.price;
        slot.status = o.status;
        slot.skipped = o.skipped;
        slot.started = o.started;
        slot.performed_at = o.performed_at;
        slot.finished = o.finished;
        slot.pipeline_latency = o.pipeline_latency;
        slot.owner_view = o.owner_view;
        slot.failure = o.failure;
        slot.unverifiable = o.unverifiable;
        if (o.unverifiable && o.status == SlotStatus::confirmed)
            c.flags.push_back("fairness violated: unobservable action (slot " + std::to_string(o.slot_id) + ")");
    }
    if (c.outstanding_batches.empty()) {
        c.service_done_at = rt_.net.now();
        begin_payment(c);
    }
}

void InterfaceEnclave::begin_payment(Campaign& c)
{
    if (c.payment_started_at)
        return;
    c.payment_started_at = rt_.net.now();
    const Amount d = c.schedule.deposit_per_slot;

    std::vector<SlotPrice> confirmed;
    std::size_t timeouts = 0;
    for (const auto& s : c.slots) {
        if (s.status == SlotStatus::confirmed)
            confirmed.push_back(SlotPrice{s.slot_id, s.price});
        else if (s.status == SlotStatus::timeout)
            ++timeouts;
    }
    std::vector<std::int64_t> order;
    std::vector<std::size_t> entries = match_confirmed(c.schedule.budgets, confirmed, order);

    std::vector<std::vector<msg::SettlementOrder>> per_share(c.shares.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        ActionRecord& slot = c.slots.at(static_cast<std::size_t>(order[i]));
        slot.budget_entry = entries[i];
        std::size_t share = c.schedule.share_of_entry(entries[i]);
        const OwnerRecord* o = owner(slot.owner_id);
        SlotAmounts amounts = split_price(slot.price, rt_.params.fee_rate);
        per_share[share].push_back(msg::SettlementOrder{slot.slot_id, slot.owner_id, o ? o->proxy_actor : slot.owner_id,
                                                        o ? o->payout_address : slot.owner_id, amounts.reward,
                                                        amounts.fee, d});
        if (c.shares[share].recovered)
            continue;
        c.deposit_returned += d;
        c.rewards_scheduled += amounts.reward;
        c.fees_scheduled += amounts.fee;
    }
    // Burns come out of the unmatched entries, lowest first.
    std::size_t unmatched = c.schedule.budgets.size() - order.size();
    for (std::size_t e = 0; e < unmatched && timeouts > 0; ++e) {
        ShareState& s = c.shares[c.schedule.share_of_entry(e)];
        if (s.recovered)
            continue;
        s.burn += d;
        c.deposit_burned += d;
        --timeouts;
    }
    if (timeouts > 0)
        c.flags.push_back(std::to_string(timeouts) + " timeout burns not assignable");
    c.deposit_refunded = c.quote.deposit_required - c.deposit_returned - c.deposit_burned;

    for (std::size_t j = 0; j < c.shares.size(); ++j) {
        ShareState& s = c.shares[j];
        if (s.recovered)
            continue;
        s.instructed = true;
        msg::PaymentInstruction ins;
        ins.campaign_id = c.spec.campaign_id;
        ins.interface_id = id();
        ins.share_index = j;
        ins.head = ledger::NoteId{c.split_tx_id, static_cast<std::uint32_t>(j)};
        ins.head_value = s.value;
        ins.settlements = per_share[j];
        ins.burn = s.burn;
        ins.renter_actor = c.spec.renter_id;
        ins.refund_address = c.spec.renter_refund_address;
        Message m;
        m.src = id();
        m.dst = s.payment_enclave;
        m.kind = MsgKind::payment_instruction;
        m.channel = Channel::attested;
        m.meta.campaign = c.spec.campaign_id;
        m.payload = std::move(ins);
        rt_.net.send(std::move(m), rt_.params.latency.link);
    }
    rt_.net.log(id(), "payment",
                "campaign=" + c.spec.campaign_id + " confirmed=" + std::to_string(order.size()) +
                    " burned=" + c.deposit_burned.to_string());
    maybe_terminate(c);
}

void InterfaceEnclave::on_payment_done(const msg::PaymentDone& done)
{
    auto it = campaigns_.find(done.campaign_id);
    if (it == campaigns_.end()) {
        for (auto& h : handoffs_)
            if (h.campaign_id == done.campaign_id)
                h.closed.push_back(done);
        return;
    }
    Campaign& c = it->second;
    if (done.share_index >= c.shares.size())
        return;
    ShareState& s = c.shares[done.share_index];
    s.done = true;
    s.issued = done.issued;
    s.terminal_tx = done.terminal_tx;
    if (done.last_reward_at && (!c.last_reward_at || *done.last_reward_at > *c.last_reward_at))
        c.last_reward_at = done.last_reward_at;
    maybe_terminate(c);
}

void InterfaceEnclave::watch(const std::string& campaign_id)
{
    auto it = campaigns_.find(campaign_id);
    if (it == campaigns_.end() || it->second.status == CampaignStatus::terminated)
        return;
    Campaign& c = it->second;
    SimTime now = rt_.net.now();
    const Duration window = rt_.params.liveness_window;

    std::vector<std::string> lost;
    for (const auto& enc : c.outstanding_batches)
        if (now - c.service_heartbeat[enc] > window)
            lost.push_back(enc);
    for (const auto& enc : lost) {
        c.outstanding_batches.erase(enc);
        c.flags.push_back("service enclave " + enc + " lost");
        for (auto& s : c.slots)
            if (s.service_enclave == enc && !is_final(s.status)) {
                s.status = SlotStatus::failed;
                s.failure = "service enclave lost";
            }
    }
    if (!lost.empty() && c.outstanding_batches.empty()) {
        c.service_done_at = now;
        begin_payment(c);
    }
    for (std::size_t j = 0; j < c.shares.size(); ++j) {
        ShareState& s = c.shares[j];
        if (!s.done && !s.recovered && now - s.last_heartbeat > window)
            recover_share(c, j);
    }
    maybe_terminate(c);
    if (c.status != CampaignStatus::terminated)
        rt_.net.schedule(rt_.params.heartbeat_interval, id(), [this, campaign_id] { watch(campaign_id); });
}

void InterfaceEnclave::recover_share(Campaign& c, std::size_t index)
{
    ShareState& s = c.shares[index];
    ledger::NoteId start{c.split_tx_id, static_cast<std::uint32_t>(index)};
    std::optional<ledger::Note> head = find_share_head(rt_.ledger, start, s.address);
    s.recovered = true;
    c.flags.push_back("share " + std::to_string(index) + " recovered from " + s.payment_enclave);
    if (!head) {
        rt_.net.log(id(), "recover", "campaign=" + c.spec.campaign_id + " share=" + std::to_string(index) + " head=none");
        return;
    }
    ledger::Transaction tx;
    try {
        tx = recover_funds(rt_.mesh, id(), s.payment_enclave, ledger::SpendKey{s.address, {}}, *head,
                           s.instructed ? s.burn : Amount{}, c.spec.renter_refund_address,
                           c.spec.campaign_id + "/recover/" + std::to_string(index), s.last_heartbeat, rt_.net.now(),
                           rt_.params.liveness_window);
    } catch (const Error& e) {
        s.recovered = false;
        c.flags.pop_back();
        rt_.net.log(id(), "recover-refused", e.what());
        return;
    }
    s.terminal_tx = tx.tx_id;
    rt_.net.log(id(), "recover",
                "campaign=" + c.spec.campaign_id + " share=" + std::to_string(index) + " tx=" + tx.tx_id.short_hex());
    Message m;
    m.src = id();
    m.dst = ledger_actor;
    m.kind = MsgKind::refund_broadcast;
    m.meta.campaign = c.spec.campaign_id;
    m.payload = msg::TxCopy{tx, c.spec.campaign_id, -1};
    rt_.net.send(m, rt_.params.latency.link);
    m.dst = c.spec.renter_id;
    m.kind = MsgKind::refund_to_renter;
    m.channel = Channel::attested;
    rt_.net.send(std::move(m), rt_.params.latency.link);
}

void InterfaceEnclave::maybe_terminate(Campaign& c)
{
    if (c.status == CampaignStatus::terminated || !c.payment_started_at)
        return;
    for (const auto& s : c.shares)
        if (!s.done && !s.recovered)
            return;
    c.status = CampaignStatus::terminated;
    c.terminated_at = rt_.net.now();
    rt_.net.log(id(), "terminated", "campaign=" + c.spec.campaign_id);
}

void InterfaceEnclave::on_handoff(const msg::RecoveryHandoff& h)
{
    for (const auto& existing : handoffs_)
        if (existing.campaign_id == h.campaign_id)
            return;
    handoffs_.push_back(Handoff{h.campaign_id, h.failed_interface, rt_.net.now(), {}});
    rt_.net.log(id(), "takeover", "campaign=" + h.campaign_id + " from=" + h.failed_interface);
    for (const auto& pe : h.payment_enclaves) {
        msg::PaymentInstruction ins;
        ins.campaign_id = h.campaign_id;
        ins.interface_id = id();
        ins.share_index = msg::all_shares;
        ins.renter_actor = h.renter_actor;
        ins.refund_address = h.refund_address;
        send(MsgKind::payment_instruction, pe, std::move(ins), h.campaign_id);
    }
}

} // namespace teevil::enclave
