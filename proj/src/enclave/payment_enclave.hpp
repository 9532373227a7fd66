#pragma once

#include "attestation/mesh.hpp"
#include "enclave/messages.hpp"
#include "enclave/runtime.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace teevil::enclave {

struct FundShare {
    std::size_t share_id = 0;
    std::string address;
    ledger::NoteId note;
    Amount value;
};

/// One split transaction turning the funding note into per-share notes; any
/// funding beyond the share total goes back to `refund_address`.
std::pair<ledger::Transaction, std::vector<FundShare>>
split_funds(const ledger::Note& funds, const ledger::SpendKey& funds_key, const std::vector<std::string>& share_addresses,
            const std::vector<Amount>& values, const std::string& refund_address, const std::string& memo);

/// Even split over P shares (values differ by at most one unit).
std::pair<ledger::Transaction, std::vector<FundShare>>
allocate_shares(const ledger::Note& funds, const ledger::SpendKey& funds_key,
                const std::vector<std::string>& share_addresses, const std::string& memo);

/// Settlement for one slot, spending the share head. Outputs in order:
/// reward, deposit return, maintainer fee, change (the new head). Throws
/// Error{insufficient_share}.
ledger::Transaction issue_reward(const ledger::SpendKey& key, const ledger::Note& head,
                                 const msg::SettlementOrder& order, const std::string& maintainer_address,
                                 const std::string& refund_address, const std::string& memo);

/// Terminal transaction of a share: burns `burn` and refunds the rest.
ledger::Transaction close_share(const ledger::SpendKey& key, const ledger::Note& head, Amount burn,
                                const std::string& refund_address, const std::string& memo);

/// Follows the spend chain from `start` through chain and mempool and
/// returns the current unspent head, if any.
std::optional<ledger::Note> find_share_head(const ledger::LedgerNode& node, const ledger::NoteId& start,
                                            const std::string& share_address);

/// Sweep of a dead payment enclave's share with the escrowed key. Throws
/// Error{recovery_refused} while the enclave's heartbeat is recent.
ledger::Transaction recover_funds(attestation::Mesh& mesh, const std::string& interface_id,
                                  const std::string& payment_id, const ledger::SpendKey& key_hint,
                                  const ledger::Note& head, Amount burn, const std::string& refund_address,
                                  const std::string& memo, SimTime last_heartbeat, SimTime now, Duration window);

/// Holds fund shares and issues their chained settlement transactions, each
/// delivered over three paths: host broadcast, renter copy, owner copy.
class PaymentEnclave {
public:
    PaymentEnclave(Runtime& rt, attestation::EnclaveIdentity identity);

    const std::string& id() const { return identity_.enclave_id; }
    const attestation::EnclaveIdentity& identity() const { return identity_; }

    /// Fresh spend key for a campaign share; the caller escrows it.
    ledger::SpendKey open_share(const std::string& campaign_id, std::size_t index);
    /// Records the funded share note and starts heartbeats. `peers` lists
    /// every payment enclave of the campaign, for recovery handoffs.
    void bind_share(const std::string& campaign_id, std::size_t index, const ledger::NoteId& note, Amount value,
                    const std::string& interface_id, const std::string& renter_actor,
                    const std::string& refund_address, std::vector<std::string> peers);
    void set_backup_interfaces(std::vector<std::string> ids) { backups_ = std::move(ids); }

    void handle(const simnet::Message& m);
    void on_revive();
    /// Every transaction this enclave produced, in order.
    const std::vector<ledger::Transaction>& emitted() const { return emitted_; }

    std::size_t open_shares() const;

private:
    std::vector<ledger::Transaction> emitted_;
    struct Share {
        std::string campaign_id;
        std::size_t index = 0;
        ledger::SpendKey key;
        std::string interface_id;
        std::string renter_actor;
        std::string refund_address;
        std::vector<std::string> peers;
        ledger::Note head;
        Amount initial_value;
        bool bound = false;
        std::optional<msg::PaymentInstruction> instruction;
        std::size_t next = 0;
        bool busy = false;
        bool finished = false;
        std::vector<Digest> issued;
        std::optional<Digest> terminal_tx;
        std::optional<SimTime> last_reward_at;
    };
    using Key = std::pair<std::string, std::size_t>;

    void process(const Key& key);
    void emit(const Key& key);
    void send_copies(const ledger::Transaction& tx, const Share& s, std::int64_t slot, const std::string& owner_actor,
                     bool terminal);
    void heartbeat_loop();
    void handoff(const std::string& campaign_id);

    Runtime& rt_;
    attestation::EnclaveIdentity identity_;
    std::map<Key, Share> shares_;
    std::vector<std::string> backups_;
    std::map<std::string, SimTime> last_ack_;
    std::set<std::string> handed_off_;
    bool heartbeating_ = false;
};

} // namespace teevil::enclave
