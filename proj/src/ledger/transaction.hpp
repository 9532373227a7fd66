#pragma once

#include "common/amount.hpp"
#include "common/digest.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace teevil::ledger {

/// Address that no key controls; value paid here is destroyed.
inline constexpr std::string_view burn_address = "burn";

enum class OutputKind {
    issuance,
    funding,
    share,
    reward,
    deposit_return,
    fee,
    refund,
    change,
    burn,
    transfer,
};

std::string_view to_string(OutputKind kind);
std::optional<OutputKind> output_kind_from_string(std::string_view text);

struct NoteId {
    Digest tx_id;
    std::uint32_t index = 0;

    std::string to_string() const { return tx_id.hex() + ":" + std::to_string(index); }
    friend auto operator<=>(const NoteId&, const NoteId&) = default;
};

struct TxOutput {
    std::string address;
    Amount value;
    OutputKind kind = OutputKind::transfer;

    friend bool operator==(const TxOutput&, const TxOutput&) = default;
};

struct Note {
    NoteId id;
    std::string owner_address;
    Amount value;
    OutputKind kind = OutputKind::transfer;
};

struct Transaction {
    std::vector<NoteId> inputs;
    std::vector<TxOutput> outputs;
    /// Free text that makes otherwise identical transactions distinct and
    /// tags them for reporting (campaign, slot). No whitespace.
    std::string memo;
    /// One per input, aligned by index. Not covered by tx_id.
    std::vector<Digest> witnesses;
    Digest tx_id;

    Digest compute_id() const;
    void seal() { tx_id = compute_id(); }
    Note output_note(std::uint32_t index) const;
    Amount output_total() const;
    bool is_issuance() const { return inputs.empty(); }
};

struct SpendKey {
    std::string address;
    Digest secret;
};

/// Witness proving control of an input's address for this transaction.
Digest sign_input(const SpendKey& key, const Digest& tx_id);

/// Signs every input with the key for its note's address. `keys` must cover
/// each input address; the caller supplies the resolved input notes.
void sign_transaction(Transaction& tx, const std::vector<Note>& spent,
                      const std::vector<SpendKey>& keys);

/// Stands in for public-key signature verification: the ledger knows each
/// address's secret and recomputes witnesses. The burn address is never
/// registered, so nothing sent there can be spent.
class KeyRegistry {
public:
    /// Derives a deterministic key for `address` from `seed` and registers it.
    SpendKey create(const std::string& address, std::uint64_t seed);
    void add(const SpendKey& key);
    const Digest* secret_for(std::string_view address) const;

private:
    std::map<std::string, Digest, std::less<>> secrets_;
};

using UtxoLookup = std::function<std::optional<Note>(const NoteId&)>;

/// Throws Error{invalid_transaction} when the transaction is unbalanced,
/// spends a missing or spent note, lacks a valid witness, or is malformed.
/// Issuance transactions (no inputs) are rejected unless `allow_issuance`.
void validate_transaction(const Transaction& tx, const UtxoLookup& lookup,
                          const KeyRegistry* keys, bool allow_issuance = false);

} // namespace teevil::ledger

template <>
struct std::hash<teevil::ledger::NoteId> {
    std::size_t operator()(const teevil::ledger::NoteId& n) const noexcept
    {
        return std::hash<teevil::Digest>{}(n.tx_id) ^ (static_cast<std::size_t>(n.index) * 0x9e3779b97f4a7c15ull);
    }
};
