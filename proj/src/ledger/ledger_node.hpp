#pragma once

#include "ledger/chain.hpp"

#include <memory>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace teevil::ledger {

/// The honest network's view of the ledger: the canonical chain plus a
/// mempool of accepted, not yet mined transactions. Submission is idempotent
/// by tx_id, so the same transaction arriving over several delivery paths is
/// included exactly once.
class LedgerNode {
public:
    enum class SubmitOutcome { queued, duplicate };

    LedgerNode(Chain genesis, std::shared_ptr<const KeyRegistry> keys);

    /// Throws Error{invalid_transaction} on imbalance, double spend against
    /// chain + mempool, or a bad witness.
    SubmitOutcome submit_tx(const Transaction& tx);

    /// Mines every mempool transaction into a new block.
    const Block& mine_block();

    const Chain& chain() const { return chain_; }
    const std::vector<Transaction>& mempool() const { return mempool_; }
    bool knows(const Digest& tx_id) const;
    bool in_mempool(const Digest& tx_id) const { return mempool_ids_.contains(tx_id); }

    /// Unspent notes after applying the mempool on top of the chain.
    std::optional<Note> pending_unspent(const NoteId& id) const;
    std::vector<Note> pending_unspent_for(std::string_view address) const;
    /// Finds a transaction in the chain or the mempool.
    const Transaction* find_transaction(const Digest& tx_id) const;

    const KeyRegistry& keys() const { return *keys_; }

private:
    Chain chain_;
    std::shared_ptr<const KeyRegistry> keys_;
    std::vector<Transaction> mempool_;
    std::unordered_set<Digest> mempool_ids_;
    std::unordered_map<NoteId, Note> mempool_created_;
    std::unordered_set<NoteId> mempool_spent_;
};

} // namespace teevil::ledger
