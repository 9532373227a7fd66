#pragma once

#include "ledger/block.hpp"
#include "ledger/transaction.hpp"

#include <memory>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace teevil::ledger {

struct Block {
    BlockHeader header;
    std::vector<Transaction> txs;
};

/// Commitment to a block's transaction list; light clients check inclusion by
/// recomputing it from the list of tx ids.
Digest payload_digest_of(const std::vector<Digest>& tx_ids);
Digest payload_digest_of(const std::vector<Transaction>& txs);

/// Immutable chain snapshot. Copies share block storage, so handing a Chain
/// to an observer is cheap.
class Chain {
public:
    /// Genesis block at height 0 issuing `allocations`; the seed is committed
    /// into the genesis payload so different scenarios never share a genesis.
    static Chain make_genesis(unsigned difficulty_bits, const std::vector<TxOutput>& allocations,
                              std::uint64_t seed);

    /// Accepts an externally produced genesis block after checking its header,
    /// payload commitment and issuance transaction.
    static Chain from_genesis_block(Block genesis, unsigned difficulty_bits);

    unsigned difficulty_bits() const { return difficulty_bits_; }
    std::uint64_t tip_height() const { return blocks_.back()->header.height; }
    const BlockHeader& tip() const { return blocks_.back()->header; }
    const Block& block(std::uint64_t height) const { return *blocks_.at(height); }
    std::size_t size() const { return blocks_.size(); }
    const std::vector<std::shared_ptr<const Block>>& blocks() const { return blocks_; }

    std::vector<BlockHeader> headers(std::uint64_t from_height = 0) const;
    /// The last `count` headers (fewer if the chain is shorter).
    std::vector<BlockHeader> header_suffix(std::size_t count) const;

    std::optional<Note> unspent_note(const NoteId& id) const;
    bool is_spent(const NoteId& id) const { return state_->spent.contains(id); }
    std::optional<std::uint64_t> inclusion_height(const Digest& tx_id) const;
    const Transaction* find_transaction(const Digest& tx_id) const;
    std::vector<Note> unspent_for(std::string_view address) const;
    Amount balance(std::string_view address) const;
    Amount genesis_issuance() const;

    /// Chain truncated to blocks [0, height].
    Chain prefix(std::uint64_t height) const;

private:
    struct State {
        std::unordered_map<NoteId, Note> utxo;
        std::unordered_set<NoteId> spent;
        std::unordered_map<Digest, std::uint64_t> tx_height;
    };

    Chain() = default;
    static void apply(State& state, const Transaction& tx, std::uint64_t height);

    std::vector<std::shared_ptr<const Block>> blocks_;
    std::shared_ptr<const State> state_;
    unsigned difficulty_bits_ = default_difficulty_bits;

    friend Chain append_block(const Chain&, std::vector<Transaction>, const KeyRegistry*);
    friend Chain append_mined_block(const Chain&, Block, const KeyRegistry*);
};

/// Validates `txs` in order against the chain (later transactions may spend
/// outputs of earlier ones in the same block), then mines a block on top.
/// Throws Error{invalid_transaction} naming the offending tx.
Chain append_block(const Chain& chain, std::vector<Transaction> txs, const KeyRegistry* keys = nullptr);

/// Appends an already-mined block after checking its header and payload.
/// Used by restore; throws Error{malformed_chain} or Error{invalid_transaction}.
Chain append_mined_block(const Chain& chain, Block block, const KeyRegistry* keys = nullptr);

/// 0 if absent, else 1 + (tip height - inclusion height).
std::uint64_t confirmations(const Chain& chain, const Digest& tx_id);

/// What a given address may learn about a transaction: everyone sees that it
/// exists and how many outputs it has; only outputs paying `viewer_address`
/// reveal amount and address.
struct TxView {
    bool exists = false;
    std::size_t output_count = 0;
    std::vector<std::pair<std::uint32_t, TxOutput>> visible_outputs;
};

TxView observe_transaction(const Chain& chain, const Digest& tx_id, std::string_view viewer_address);

/// Light-client inclusion proof: the full list of tx ids of the including
/// block lets the verifier recompute its payload digest.
struct InclusionProof {
    std::uint64_t block_height = 0;
    std::vector<Digest> block_tx_ids;
};

InclusionProof make_inclusion_proof(const Chain& chain, const Digest& tx_id);

/// Confirmations of `tx_id` within a header view, or 0 if the proof does not
/// bind it to a header of the view.
std::uint64_t confirmations_in_view(std::span<const BlockHeader> view, const Digest& tx_id,
                                    const InclusionProof& proof);

} // namespace teevil::ledger
