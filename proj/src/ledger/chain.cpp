#include "ledger/chain.hpp"

#include "common/error.hpp"

#include <algorithm>

namespace teevil::ledger {

Digest payload_digest_of(const std::vector<Digest>& tx_ids)
{
    Hasher h;
    h.add(std::string_view("teevil/payload/v1"));
    h.add_u64(tx_ids.size());
    for (const auto& id : tx_ids)
        h.add(id);
    return h.finish();
}

Digest payload_digest_of(const std::vector<Transaction>& txs)
{
    std::vector<Digest> ids;
    ids.reserve(txs.size());
    for (const auto& tx : txs)
        ids.push_back(tx.tx_id);
    return payload_digest_of(ids);
}

void Chain::apply(State& state, const Transaction& tx, std::uint64_t height)
{
    for (const auto& in : tx.inputs) {
        state.utxo.erase(in);
        state.spent.insert(in);
    }
    for (std::uint32_t i = 0; i < tx.outputs.size(); ++i)
        state.utxo.emplace(NoteId{tx.tx_id, i}, tx.output_note(i));
    state.tx_height.emplace(tx.tx_id, height);
}

Chain Chain::make_genesis(unsigned difficulty_bits, const std::vector<TxOutput>& allocations,
                          std::uint64_t seed)
{
    Transaction issuance;
    issuance.outputs = allocations;
    for (auto& out : issuance.outputs)
        out.kind = OutputKind::issuance;
    issuance.memo = "genesis/" + std::to_string(seed);
    issuance.seal();
    validate_transaction(
        issuance, [](const NoteId&) -> std::optional<Note> { return std::nullopt; }, nullptr, true);

    auto block = std::make_shared<Block>();
    block->txs.push_back(issuance);
    block->header = mine_header(0, Digest{}, payload_digest_of(block->txs), difficulty_bits);

    auto state = std::make_shared<State>();
    apply(*state, issuance, 0);

    Chain chain;
    chain.difficulty_bits_ = difficulty_bits;
    chain.blocks_.push_back(std::move(block));
    chain.state_ = std::move(state);
    return chain;
}

Chain Chain::from_genesis_block(Block genesis, unsigned difficulty_bits)
{
    std::vector<BlockHeader> single{genesis.header};
    if (genesis.header.height != 0)
        throw Error(ErrorCode::malformed_chain, "genesis height must be 0");
    if (auto check = verify_headers(single, difficulty_bits); !check)
        throw Error(ErrorCode::malformed_chain, "genesis: " + check.reason);
    if (payload_digest_of(genesis.txs) != genesis.header.payload_digest)
        throw Error(ErrorCode::malformed_chain, "genesis payload digest mismatch");
    auto state = std::make_shared<State>();
    for (const auto& tx : genesis.txs) {
        validate_transaction(
            tx, [](const NoteId&) -> std::optional<Note> { return std::nullopt; }, nullptr, true);
        if (!tx.is_issuance())
            throw Error(ErrorCode::malformed_chain, "genesis may only contain issuance");
        apply(*state, tx, 0);
    }
    Chain chain;
    chain.difficulty_bits_ = difficulty_bits;
    chain.blocks_.push_back(std::make_shared<Block>(std::move(genesis)));
    chain.state_ = std::move(state);
    return chain;
}

std::vector<BlockHeader> Chain::headers(std::uint64_t from_height) const
{
    std::vector<BlockHeader> out;
    for (std::uint64_t h = from_height; h < blocks_.size(); ++h)
        out.push_back(blocks_[h]->header);
    return out;
}

std::vector<BlockHeader> Chain::header_suffix(std::size_t count) const
{
    std::size_t from = blocks_.size() > count ? blocks_.size() - count : 0;
    return headers(from);
}

std::optional<Note> Chain::unspent_note(const NoteId& id) const
{
    auto it = state_->utxo.find(id);
    if (it == state_->utxo.end())
        return std::nullopt;
    return it->second;
}

std::optional<std::uint64_t> Chain::inclusion_height(const Digest& tx_id) const
{
    auto it = state_->tx_height.find(tx_id);
    if (it == state_->tx_height.end())
        return std::nullopt;
    return it->second;
}

const Transaction* Chain::find_transaction(const Digest& tx_id) const
{
    auto h = inclusion_height(tx_id);
    if (!h)
        return nullptr;
    for (const auto& tx : blocks_[*h]->txs)
        if (tx.tx_id == tx_id)
            return &tx;
    return nullptr;
}

std::vector<Note> Chain::unspent_for(std::string_view address) const
{
    std::vector<Note> out;
    for (const auto& [id, note] : state_->utxo)
        if (note.owner_address == address)
            out.push_back(note);
    std::sort(out.begin(), out.end(), [](const Note& a, const Note& b) { return a.id < b.id; });
    return out;
}

Amount Chain::balance(std::string_view address) const
{
    Amount total;
    for (const auto& [id, note] : state_->utxo)
        if (note.owner_address == address)
            total += note.value;
    return total;
}

Amount Chain::genesis_issuance() const
{
    Amount total;
    for (const auto& tx : blocks_.front()->txs)
        total += tx.output_total();
    return total;
}

Chain Chain::prefix(std::uint64_t height) const
{
    if (height > tip_height())
        throw std::out_of_range("prefix height beyond tip");
    auto state = std::make_shared<State>();
    Chain out;
    out.difficulty_bits_ = difficulty_bits_;
    for (std::uint64_t h = 0; h <= height; ++h) {
        out.blocks_.push_back(blocks_[h]);
        for (const auto& tx : blocks_[h]->txs)
            apply(*state, tx, h);
    }
    out.state_ = std::move(state);
    return out;
}

namespace {
void validate_block_txs(const Chain& chain, const std::vector<Transaction>& txs,
                        const KeyRegistry* keys,
                        std::unordered_map<NoteId, Note>& created,
                        std::unordered_set<NoteId>& consumed)
{
    std::unordered_set<Digest> ids;
    for (const auto& tx : txs) {
        if (chain.inclusion_height(tx.tx_id) || !ids.insert(tx.tx_id).second)
            throw Error(ErrorCode::invalid_transaction, tx.tx_id.short_hex() + " already included");
        validate_transaction(
            tx,
            [&](const NoteId& id) -> std::optional<Note> {
                if (consumed.contains(id))
                    return std::nullopt;
                if (auto it = created.find(id); it != created.end())
                    return it->second;
                return chain.unspent_note(id);
            },
            keys);
        for (const auto& in : tx.inputs) {
            consumed.insert(in);
            created.erase(in);
        }
        for (std::uint32_t i = 0; i < tx.outputs.size(); ++i)
            created.emplace(NoteId{tx.tx_id, i}, tx.output_note(i));
    }
}
} // namespace

Chain append_block(const Chain& chain, std::vector<Transaction> txs, const KeyRegistry* keys)
{
    std::unordered_map<NoteId, Note> created;
    std::unordered_set<NoteId> consumed;
    validate_block_txs(chain, txs, keys, created, consumed);

    auto block = std::make_shared<Block>();
    block->header = mine_header(chain.tip_height() + 1, chain.tip().own_digest, payload_digest_of(txs),
                                chain.difficulty_bits());
    block->txs = std::move(txs);

    auto state = std::make_shared<Chain::State>(*chain.state_);
    for (const auto& tx : block->txs)
        Chain::apply(*state, tx, block->header.height);

    Chain out = chain;
    out.blocks_.push_back(std::move(block));
    out.state_ = std::move(state);
    return out;
}

Chain append_mined_block(const Chain& chain, Block block, const KeyRegistry* keys)
{
    const BlockHeader& h = block.header;
    std::vector<BlockHeader> pair{chain.tip(), h};
    if (auto check = verify_headers(pair, chain.difficulty_bits()); !check)
        throw Error(ErrorCode::malformed_chain, "block " + std::to_string(h.height) + ": " + check.reason);
    if (payload_digest_of(block.txs) != h.payload_digest)
        throw Error(ErrorCode::malformed_chain, "block " + std::to_string(h.height) + ": payload digest mismatch");

    std::unordered_map<NoteId, Note> created;
    std::unordered_set<NoteId> consumed;
    validate_block_txs(chain, block.txs, keys, created, consumed);

    auto state = std::make_shared<Chain::State>(*chain.state_);
    for (const auto& tx : block.txs)
        Chain::apply(*state, tx, h.height);

    Chain out = chain;
    out.blocks_.push_back(std::make_shared<Block>(std::move(block)));
    out.state_ = std::move(state);
    return out;
}

std::uint64_t confirmations(const Chain& chain, const Digest& tx_id)
{
    auto h = chain.inclusion_height(tx_id);
    if (!h)
        return 0;
    return 1 + (chain.tip_height() - *h);
}

TxView observe_transaction(const Chain& chain, const Digest& tx_id, std::string_view viewer_address)
{
    TxView view;
    const Transaction* tx = chain.find_transaction(tx_id);
    if (!tx)
        return view;
    view.exists = true;
    view.output_count = tx->outputs.size();
    for (std::uint32_t i = 0; i < tx->outputs.size(); ++i)
        if (tx->outputs[i].address == viewer_address)
            view.visible_outputs.emplace_back(i, tx->outputs[i]);
    return view;
}

InclusionProof make_inclusion_proof(const Chain& chain, const Digest& tx_id)
{
    auto h = chain.inclusion_height(tx_id);
    if (!h)
        return {};
    InclusionProof proof;
    proof.block_height = *h;
    for (const auto& tx : chain.block(*h).txs)
        proof.block_tx_ids.push_back(tx.tx_id);
    return proof;
}

std::uint64_t confirmations_in_view(std::span<const BlockHeader> view, const Digest& tx_id,
                                    const InclusionProof& proof)
{
    if (view.empty())
        return 0;
    if (std::find(proof.block_tx_ids.begin(), proof.block_tx_ids.end(), tx_id) == proof.block_tx_ids.end())
        return 0;
    const std::uint64_t start = view.front().height;
    const std::uint64_t tip = view.back().height;
    if (proof.block_height < start || proof.block_height > tip)
        return 0;
    if (view[proof.block_height - start].payload_digest != payload_digest_of(proof.block_tx_ids))
        return 0;
    return 1 + (tip - proof.block_height);
}

} // namespace teevil::ledger
