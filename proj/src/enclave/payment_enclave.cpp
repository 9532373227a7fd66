#include "enclave/payment_enclave.hpp"

#include "common/error.hpp"

#include <algorithm>

namespace teevil::enclave {

using ledger::Note;
using ledger::NoteId;
using ledger::OutputKind;
using ledger::SpendKey;
using ledger::Transaction;
using ledger::TxOutput;
using simnet::Channel;
using simnet::Message;
using simnet::MsgKind;

std::pair<Transaction, std::vector<FundShare>>
split_funds(const Note& funds, const SpendKey& funds_key, const std::vector<std::string>& share_addresses,
            const std::vector<Amount>& values, const std::string& refund_address, const std::string& memo)
{
    if (share_addresses.empty())
        throw Error(ErrorCode::no_payment_enclaves, "no share to fund");
    Amount total;
    for (Amount v : values)
        total += v;
    if (total > funds.value)
        throw Error(ErrorCode::insufficient_share, "shares exceed funding " + funds.value.to_string());
    Transaction tx;
    tx.inputs.push_back(funds.id);
    for (std::size_t i = 0; i < share_addresses.size(); ++i)
        tx.outputs.push_back(TxOutput{share_addresses[i], values[i], OutputKind::share});
    if (funds.value > total)
        tx.outputs.push_back(TxOutput{refund_address, funds.value - total, OutputKind::refund});
    tx.memo = memo;
    ledger::sign_transaction(tx, {funds}, {funds_key});
    std::vector<FundShare> shares;
    for (std::size_t i = 0; i < share_addresses.size(); ++i)
        shares.push_back(FundShare{i, share_addresses[i], NoteId{tx.tx_id, static_cast<std::uint32_t>(i)}, values[i]});
    return {std::move(tx), std::move(shares)};
}

std::pair<Transaction, std::vector<FundShare>>
allocate_shares(const Note& funds, const SpendKey& funds_key, const std::vector<std::string>& share_addresses,
                const std::string& memo)
{
    return split_funds(funds, funds_key, share_addresses, even_split(funds.value, share_addresses.size()), "",
                       memo);
}

Transaction issue_reward(const SpendKey& key, const Note& head, const msg::SettlementOrder& order,
                         const std::string& maintainer_address, const std::string& refund_address,
                         const std::string& memo)
{
    Amount out = order.reward + order.deposit + order.fee;
    if (out > head.value)
        throw Error(ErrorCode::insufficient_share,
                    "slot " + std::to_string(order.slot_id) + " needs " + out.to_string() + ", head holds " +
                        head.value.to_string());
    Transaction tx;
    tx.inputs.push_back(head.id);
    tx.outputs.push_back(TxOutput{order.payout_address, order.reward, OutputKind::reward});
    tx.outputs.push_back(TxOutput{refund_address, order.deposit, OutputKind::deposit_return});
    tx.outputs.push_back(TxOutput{maintainer_address, order.fee, OutputKind::fee});
    tx.outputs.push_back(TxOutput{head.owner_address, head.value - out, OutputKind::change});
    tx.memo = memo;
    ledger::sign_transaction(tx, {head}, {key});
    return tx;
}

Transaction close_share(const SpendKey& key, const Note& head, Amount burn, const std::string& refund_address,
                        const std::string& memo)
{
    Amount b = std::min(burn, head.value);
    Transaction tx;
    tx.inputs.push_back(head.id);
    if (b > Amount{})
        tx.outputs.push_back(TxOutput{std::string(ledger::burn_address), b, OutputKind::burn});
    tx.outputs.push_back(TxOutput{refund_address, head.value - b, OutputKind::refund});
    tx.memo = memo;
    ledger::sign_transaction(tx, {head}, {key});
    return tx;
}

std::optional<Note> find_share_head(const ledger::LedgerNode& node, const NoteId& start,
                                    const std::string& share_address)
{
    std::map<NoteId, const Transaction*> spender;
    auto index = [&](const Transaction& tx) {
        for (const auto& in : tx.inputs)
            spender[in] = &tx;
    };
    for (const auto& block : node.chain().blocks())
        for (const auto& tx : block->txs)
            index(tx);
    for (const auto& tx : node.mempool())
        index(tx);

    NoteId cur = start;
    for (;;) {
        auto it = spender.find(cur);
        if (it == spender.end())
            return node.pending_unspent(cur);
        const Transaction& tx = *it->second;
        std::optional<NoteId> next;
        for (std::uint32_t i = 0; i < tx.outputs.size(); ++i)
            if (tx.outputs[i].address == share_address && tx.outputs[i].kind == OutputKind::change)
                next = NoteId{tx.tx_id, i};
        if (!next)
            return std::nullopt;
        cur = *next;
    }
}

Transaction recover_funds(attestation::Mesh& mesh, const std::string& interface_id, const std::string& payment_id,
                          const SpendKey& key_hint, const Note& head, Amount burn, const std::string& refund_address,
                          const std::string& memo, SimTime last_heartbeat, SimTime now, Duration window)
{
    SpendKey key = mesh.release_escrow(interface_id, payment_id, key_hint.address, last_heartbeat, now, window);
    Transaction tx = close_share(key, head, burn, refund_address, memo);
    mesh.mark_swept(key.address);
    return tx;
}

PaymentEnclave::PaymentEnclave(Runtime& rt, attestation::EnclaveIdentity identity)
    : rt_(rt), identity_(std::move(identity))
{
}

SpendKey PaymentEnclave::open_share(const std::string& campaign_id, std::size_t index)
{
    std::string address = "share-" + campaign_id + "-" + std::to_string(index) + "-" + id();
    Hasher h;
    h.add(std::string_view("teevil/share-key")).add(address).add_u64(rt_.seed);
    std::uint64_t seed = 0;
    Digest d = h.finish();
    for (int i = 0; i < 8; ++i)
        seed = (seed << 8) | d.bytes[i];
    SpendKey key = rt_.keys->create(address, seed);
    Share& s = shares_[{campaign_id, index}];
    s.campaign_id = campaign_id;
    s.index = index;
    s.key = key;
    return key;
}

void PaymentEnclave::bind_share(const std::string& campaign_id, std::size_t index, const NoteId& note, Amount value,
                                const std::string& interface_id, const std::string& renter_actor,
                                const std::string& refund_address, std::vector<std::string> peers)
{
    Share& s = shares_.at({campaign_id, index});
    s.head = Note{note, s.key.address, value, OutputKind::share};
    s.initial_value = value;
    s.interface_id = interface_id;
    s.renter_actor = renter_actor;
    s.refund_address = refund_address;
    s.peers = std::move(peers);
    s.bound = true;
    last_ack_.emplace(interface_id, rt_.net.now());
    if (!heartbeating_) {
        heartbeating_ = true;
        rt_.net.schedule(Duration{0}, id(), [this] { heartbeat_loop(); });
    }
}

std::size_t PaymentEnclave::open_shares() const
{
    return static_cast<std::size_t>(
        std::count_if(shares_.begin(), shares_.end(), [](const auto& kv) { return kv.second.bound && !kv.second.finished; }));
}

void PaymentEnclave::handle(const Message& m)
{
    switch (m.kind) {
    case MsgKind::payment_instruction: {
        const auto& ins = std::any_cast<const msg::PaymentInstruction&>(m.payload);
        if (ins.share_index == msg::all_shares) {
            std::vector<Key> keys;
            for (auto& [key, s] : shares_) {
                if (s.campaign_id != ins.campaign_id || !s.bound || s.finished || s.instruction)
                    continue;
                msg::PaymentInstruction own = ins;
                own.share_index = key.second;
                own.head = s.head.id;
                own.head_value = s.head.value;
                s.interface_id = ins.interface_id;
                s.instruction = own;
                keys.push_back(key);
            }
            rt_.net.log(id(), "terminate", "campaign=" + ins.campaign_id + " shares=" + std::to_string(keys.size()));
            for (const auto& key : keys)
                process(key);
            return;
        }
        Key key{ins.campaign_id, ins.share_index};
        auto it = shares_.find(key);
        if (it == shares_.end() || it->second.finished || it->second.instruction)
            return;
        it->second.instruction = ins;
        rt_.net.log(id(), "instruction",
                    "campaign=" + ins.campaign_id + " share=" + std::to_string(ins.share_index) +
                        " settlements=" + std::to_string(ins.settlements.size()));
        process(key);
        break;
    }
    case MsgKind::heartbeat: {
        const auto& ack = std::any_cast<const msg::HeartbeatAck&>(m.payload);
        last_ack_[ack.interface_id] = rt_.net.now();
        break;
    }
    default: break;
    }
}

void PaymentEnclave::on_revive()
{
    rt_.net.log(id(), "resume", "shares=" + std::to_string(open_shares()));
    for (auto& [key, s] : shares_)
        s.busy = false;
    for (auto& [iface, t] : last_ack_)
        t = rt_.net.now();
    heartbeating_ = true;
    heartbeat_loop();
    for (auto& [key, s] : shares_)
        if (s.instruction && !s.finished)
            process(key);
}

void PaymentEnclave::process(const Key& key)
{
    Share& s = shares_.at(key);
    if (s.busy || s.finished || !s.instruction)
        return;
    s.busy = true;
    Duration zk = rt_.params.latency.snark.draw(rt_.net);
    rt_.net.schedule(zk, id(), [this, key] { emit(key); });
}

void PaymentEnclave::emit(const Key& key)
{
    Share& s = shares_.at(key);
    s.busy = false;
    const msg::PaymentInstruction& ins = *s.instruction;
    if (s.next < ins.settlements.size()) {
        const msg::SettlementOrder& order = ins.settlements[s.next];
        Transaction tx;
        try {
            tx = issue_reward(s.key, s.head, order, rt_.params.maintainer_address, ins.refund_address,
                              ins.campaign_id + "/slot/" + std::to_string(order.slot_id));
        } catch (const Error& e) {
            rt_.net.log(id(), "insufficient", e.what());
            Message m;
            m.src = id();
            m.dst = ins.interface_id;
            m.kind = MsgKind::rebalance_request;
            m.channel = Channel::attested;
            m.meta.campaign = ins.campaign_id;
            m.meta.slot = order.slot_id;
            rt_.net.send(std::move(m), rt_.params.latency.link);
            ++s.next;
            process(key);
            return;
        }
        emitted_.push_back(tx);
        s.head = tx.output_note(3);
        s.issued.push_back(tx.tx_id);
        s.last_reward_at = rt_.net.now();
        ++s.next;
        rt_.net.log(id(), "settle",
                    "campaign=" + ins.campaign_id + " slot=" + std::to_string(order.slot_id) +
                        " tx=" + tx.tx_id.short_hex());
        send_copies(tx, s, order.slot_id, order.owner_actor, false);
        process(key);
        return;
    }
    Transaction tx = close_share(s.key, s.head, ins.burn, ins.refund_address,
                                 ins.campaign_id + "/refund/" + std::to_string(ins.share_index));
    emitted_.push_back(tx);
    s.terminal_tx = tx.tx_id;
    s.finished = true;
    rt_.net.log(id(), "close", "campaign=" + ins.campaign_id + " share=" + std::to_string(ins.share_index) +
                                   " tx=" + tx.tx_id.short_hex());
    send_copies(tx, s, -1, "", true);

    Message done;
    done.src = id();
    done.dst = ins.interface_id;
    done.kind = MsgKind::payment_done;
    done.channel = Channel::attested;
    done.meta.campaign = ins.campaign_id;
    done.payload = msg::PaymentDone{ins.campaign_id, ins.share_index, s.issued, s.terminal_tx, s.last_reward_at};
    rt_.net.send(std::move(done), rt_.params.latency.link);
}

void PaymentEnclave::send_copies(const Transaction& tx, const Share& s, std::int64_t slot,
                                 const std::string& owner_actor, bool terminal)
{
    const std::string& campaign = s.campaign_id;
    auto copy = [&](MsgKind kind, const std::string& dst, Channel ch, const std::string& owner) {
        Message m;
        m.src = id();
        m.dst = dst;
        m.kind = kind;
        m.channel = ch;
        m.meta.campaign = campaign;
        m.meta.slot = slot;
        m.meta.owner = owner;
        m.payload = msg::TxCopy{tx, campaign, slot};
        rt_.net.send(std::move(m), rt_.params.latency.link);
    };
    if (terminal) {
        copy(MsgKind::refund_broadcast, ledger_actor, Channel::plain, "");
        copy(MsgKind::refund_to_renter, s.renter_actor, Channel::attested, "");
        return;
    }
    const auto& order = s.instruction->settlements[s.next - 1];
    copy(MsgKind::settlement_broadcast, ledger_actor, Channel::plain, order.owner_id);
    copy(MsgKind::settlement_to_renter, s.renter_actor, Channel::attested, order.owner_id);
    copy(MsgKind::settlement_to_owner, owner_actor, Channel::attested, order.owner_id);
}

void PaymentEnclave::heartbeat_loop()
{
    std::map<std::string, std::vector<std::string>> by_interface;
    for (const auto& [key, s] : shares_)
        if (s.bound && !s.finished)
            by_interface[s.interface_id].push_back(s.campaign_id);
    if (by_interface.empty()) {
        heartbeating_ = false;
        return;
    }
    for (auto& [iface, cids] : by_interface) {
        std::sort(cids.begin(), cids.end());
        cids.erase(std::unique(cids.begin(), cids.end()), cids.end());
        Message m;
        m.src = id();
        m.dst = iface;
        m.kind = MsgKind::heartbeat;
        m.channel = Channel::attested;
        m.payload = msg::Heartbeat{id(), cids};
        rt_.net.send(std::move(m), rt_.params.latency.link);
        if (!backups_.empty() && rt_.net.now() - last_ack_[iface] > rt_.params.liveness_window)
            for (const auto& c : cids)
                handoff(c);
    }
    rt_.net.schedule(rt_.params.heartbeat_interval, id(), [this] { heartbeat_loop(); });
}

void PaymentEnclave::handoff(const std::string& campaign_id)
{
    if (handed_off_.contains(campaign_id))
        return;
    const Share* any = nullptr;
    for (const auto& [key, s] : shares_)
        if (s.campaign_id == campaign_id && s.bound)
            any = &s;
    if (!any)
        return;
    auto target = std::find_if(backups_.begin(), backups_.end(),
                               [&](const std::string& b) { return b != any->interface_id; });
    if (target == backups_.end())
        return;
    handed_off_.insert(campaign_id);
    msg::RecoveryHandoff h;
    h.campaign_id = campaign_id;
    h.failed_interface = any->interface_id;
    h.renter_actor = any->renter_actor;
    h.refund_address = any->refund_address;
    h.payment_enclaves = any->peers;
    rt_.net.log(id(), "handoff", "campaign=" + campaign_id + " to=" + *target);
    Message m;
    m.src = id();
    m.dst = *target;
    m.kind = MsgKind::recovery_handoff;
    m.channel = Channel::attested;
    m.meta.campaign = campaign_id;
    m.payload = std::move(h);
    rt_.net.send(std::move(m), rt_.params.latency.link);
}

} // namespace teevil::enclave
