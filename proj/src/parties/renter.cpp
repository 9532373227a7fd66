#include "parties/renter.hpp"

#include "common/error.hpp"

namespace teevil::parties {

using simnet::Message;
using simnet::MsgKind;

Renter::Renter(enclave::Runtime& rt, std::string renter_id, ledger::SpendKey wallet)
    : rt_(rt), id_(std::move(renter_id)), wallet_(std::move(wallet))
{
}

ledger::Transaction Renter::make_payment(const std::string& to, Amount value, const std::string& memo) const
{
    ledger::Transaction tx;
    std::vector<ledger::Note> spent;
    Amount gathered;
    for (const auto& note : rt_.ledger.pending_unspent_for(wallet_.address)) {
        if (gathered >= value)
            break;
        tx.inputs.push_back(note.id);
        spent.push_back(note);
        gathered += note.value;
    }
    if (gathered < value)
        throw Error(ErrorCode::invalid_transaction, id_ + " cannot fund " + value.to_string());
    tx.outputs.push_back(ledger::TxOutput{to, value, ledger::OutputKind::funding});
    if (gathered > value)
        tx.outputs.push_back(ledger::TxOutput{wallet_.address, gathered - value, ledger::OutputKind::change});
    tx.memo = memo;
    ledger::sign_transaction(tx, spent, std::vector<ledger::SpendKey>(spent.size(), wallet_));
    return tx;
}

void Renter::submit(const ledger::Transaction& tx)
{
    try {
        rt_.ledger.submit_tx(tx);
    } catch (const Error& e) {
        rt_.net.log(id_, "submit-rejected", e.what());
    }
}

ForgedFunding Renter::forge_funding(const std::string& to, Amount value, const std::string& memo,
                                    std::uint64_t depth) const
{
    ForgedFunding f;
    f.funding = make_payment(to, value, memo);
    f.double_spend = f.funding;
    Amount total;
    for (const auto& out : f.funding.outputs)
        total += out.value;
    f.double_spend.outputs = {ledger::TxOutput{wallet_.address, total, ledger::OutputKind::transfer}};
    f.double_spend.memo = memo + "/respend";
    std::vector<ledger::Note> spent;
    for (const auto& in : f.funding.inputs)
        spent.push_back(*rt_.ledger.pending_unspent(in));
    ledger::sign_transaction(f.double_spend, spent, std::vector<ledger::SpendKey>(spent.size(), wallet_));

    ledger::Chain fork = ledger::append_block(rt_.ledger.chain(), {f.funding}, rt_.keys.get());
    for (std::uint64_t i = 1; i < depth; ++i)
        fork = ledger::append_block(fork, {}, rt_.keys.get());
    f.fork = std::make_shared<const ledger::Chain>(std::move(fork));
    return f;
}

void Renter::handle(const Message& m)
{
    if (m.kind != MsgKind::settlement_to_renter && m.kind != MsgKind::refund_to_renter)
        return;
    const auto& copy = std::any_cast<const enclave::msg::TxCopy&>(m.payload);
    received_.push_back(copy.tx);
    try {
        rt_.ledger.submit_tx(copy.tx);
    } catch (const Error&) {
    }
}

} // namespace teevil::parties
