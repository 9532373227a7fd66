#include "ledger/transaction.hpp"

#include "common/error.hpp"

#include <algorithm>
#include <set>

namespace teevil::ledger {

std::string_view to_string(OutputKind kind)
{
    switch (kind) {
    case OutputKind::issuance: return "issuance";
    case OutputKind::funding: return "funding";
    case OutputKind::share: return "share";
    case OutputKind::reward: return "reward";
    case OutputKind::deposit_return: return "deposit_return";
    case OutputKind::fee: return "fee";
    case OutputKind::refund: return "refund";
    case OutputKind::change: return "change";
    case OutputKind::burn: return "burn";
    case OutputKind::transfer: return "transfer";
    }
    return "?";
}

std::optional<OutputKind> output_kind_from_string(std::string_view text)
{
    for (auto k : {OutputKind::issuance, OutputKind::funding, OutputKind::share, OutputKind::reward,
                   OutputKind::deposit_return, OutputKind::fee, OutputKind::refund,
                   OutputKind::change, OutputKind::burn, OutputKind::transfer})
        if (to_string(k) == text)
            return k;
    return std::nullopt;
}

Digest Transaction::compute_id() const
{
    Hasher h;
    h.add(std::string_view("teevil/tx/v1"));
    h.add_u64(inputs.size());
    for (const auto& in : inputs) {
        h.add(in.tx_id);
        h.add_u64(in.index);
    }
    h.add_u64(outputs.size());
    for (const auto& out : outputs) {
        h.add(out.address);
        h.add_i64(out.value.units());
        h.add(to_string(out.kind));
    }
    h.add(memo);
    return h.finish();
}

Note Transaction::output_note(std::uint32_t index) const
{
    const auto& out = outputs.at(index);
    return Note{NoteId{tx_id, index}, out.address, out.value, out.kind};
}

Amount Transaction::output_total() const
{
    Amount total;
    for (const auto& out : outputs)
        total += out.value;
    return total;
}

Digest sign_input(const SpendKey& key, const Digest& tx_id)
{
    Hasher h;
    h.add(std::string_view("teevil/sig/v1"));
    h.add(key.secret);
    h.add(tx_id);
    return h.finish();
}

void sign_transaction(Transaction& tx, const std::vector<Note>& spent,
                      const std::vector<SpendKey>& keys)
{
    tx.seal();
    tx.witnesses.clear();
    for (const auto& note : spent) {
        auto it = std::find_if(keys.begin(), keys.end(),
                               [&](const SpendKey& k) { return k.address == note.owner_address; });
        if (it == keys.end()) {
            tx.witnesses.push_back(Digest{});
            continue;
        }
        tx.witnesses.push_back(sign_input(*it, tx.tx_id));
    }
}

SpendKey KeyRegistry::create(const std::string& address, std::uint64_t seed)
{
    Hasher h;
    h.add(std::string_view("teevil/key/v1"));
    h.add_u64(seed);
    h.add(address);
    SpendKey key{address, h.finish()};
    add(key);
    return key;
}

void KeyRegistry::add(const SpendKey& key)
{
    if (key.address == burn_address)
        throw std::invalid_argument("the burn address cannot hold a key");
    secrets_[key.address] = key.secret;
}

const Digest* KeyRegistry::secret_for(std::string_view address) const
{
    auto it = secrets_.find(address);
    return it == secrets_.end() ? nullptr : &it->second;
}

namespace {
[[noreturn]] void reject(const Transaction& tx, const std::string& cause)
{
    throw Error(ErrorCode::invalid_transaction, tx.tx_id.short_hex() + " " + cause);
}

bool has_whitespace(std::string_view s)
{
    return std::any_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}
} // namespace

void validate_transaction(const Transaction& tx, const UtxoLookup& lookup,
                          const KeyRegistry* keys, bool allow_issuance)
{
    if (tx.compute_id() != tx.tx_id)
        reject(tx, "tx_id does not match contents");
    if (tx.outputs.empty())
        reject(tx, "no outputs");
    if (has_whitespace(tx.memo))
        reject(tx, "memo contains whitespace");
    for (const auto& out : tx.outputs) {
        if (out.value < Amount{})
            reject(tx, "negative output value");
        if (out.address.empty() || has_whitespace(out.address))
            reject(tx, "bad output address");
        if (out.kind == OutputKind::burn && out.address != burn_address)
            reject(tx, "burn output must pay the burn address");
    }
    if (tx.inputs.empty()) {
        if (!allow_issuance)
            reject(tx, "no inputs");
        return;
    }
    if (tx.witnesses.size() != tx.inputs.size())
        reject(tx, "witness count mismatch");

    std::set<NoteId> seen;
    Amount in_total;
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) {
        const NoteId& id = tx.inputs[i];
        if (!seen.insert(id).second)
            reject(tx, "double-spend: note spent twice within transaction");
        auto note = lookup(id);
        if (!note)
            reject(tx, "double-spend or unknown input " + id.to_string());
        if (keys) {
            const Digest* secret = keys->secret_for(note->owner_address);
            if (!secret)
                reject(tx, "no spend key for address " + note->owner_address);
            if (sign_input(SpendKey{note->owner_address, *secret}, tx.tx_id) != tx.witnesses[i])
                reject(tx, "bad witness for input " + id.to_string());
        }
        in_total += note->value;
    }
    if (in_total != tx.output_total())
        reject(tx, "unbalanced: inputs " + in_total.to_string() + " outputs " + tx.output_total().to_string());
}

} // namespace teevil::ledger
