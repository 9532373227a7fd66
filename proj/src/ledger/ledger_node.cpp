#include "ledger/ledger_node.hpp"

#include <algorithm>

namespace teevil::ledger {

LedgerNode::LedgerNode(Chain genesis, std::shared_ptr<const KeyRegistry> keys)
    : chain_(std::move(genesis)), keys_(std::move(keys))
{
}

bool LedgerNode::knows(const Digest& tx_id) const
{
    return mempool_ids_.contains(tx_id) || chain_.inclusion_height(tx_id).has_value();
}

std::optional<Note> LedgerNode::pending_unspent(const NoteId& id) const
{
    if (mempool_spent_.contains(id))
        return std::nullopt;
    if (auto it = mempool_created_.find(id); it != mempool_created_.end())
        return it->second;
    return chain_.unspent_note(id);
}

std::vector<Note> LedgerNode::pending_unspent_for(std::string_view address) const
{
    std::vector<Note> out;
    for (const auto& note : chain_.unspent_for(address))
        if (!mempool_spent_.contains(note.id))
            out.push_back(note);
    for (const auto& [id, note] : mempool_created_)
        if (note.owner_address == address && !mempool_spent_.contains(id))
            out.push_back(note);
    std::sort(out.begin(), out.end(), [](const Note& a, const Note& b) { return a.id < b.id; });
    return out;
}

const Transaction* LedgerNode::find_transaction(const Digest& tx_id) const
{
    if (const Transaction* tx = chain_.find_transaction(tx_id))
        return tx;
    for (const auto& tx : mempool_)
        if (tx.tx_id == tx_id)
            return &tx;
    return nullptr;
}

LedgerNode::SubmitOutcome LedgerNode::submit_tx(const Transaction& tx)
{
    if (knows(tx.tx_id))
        return SubmitOutcome::duplicate;
    validate_transaction(tx, [this](const NoteId& id) { return pending_unspent(id); }, keys_.get());
    for (const auto& in : tx.inputs) {
        mempool_spent_.insert(in);
        mempool_created_.erase(in);
    }
    for (std::uint32_t i = 0; i < tx.outputs.size(); ++i)
        mempool_created_.emplace(NoteId{tx.tx_id, i}, tx.output_note(i));
    mempool_.push_back(tx);
    mempool_ids_.insert(tx.tx_id);
    return SubmitOutcome::queued;
}

const Block& LedgerNode::mine_block()
{
    chain_ = append_block(chain_, std::move(mempool_), keys_.get());
    mempool_.clear();
    mempool_ids_.clear();
    mempool_created_.clear();
    mempool_spent_.clear();
    return chain_.block(chain_.tip_height());
}

} // namespace teevil::ledger
