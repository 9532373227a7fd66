#pragma once

#include "common/digest.hpp"
#include "common/time.hpp"
#include "ledger/transaction.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace teevil::attestation {

enum class EnclaveKind { interface, service, payment, combined };

std::string to_string(EnclaveKind kind);

/// Code identity of an enclave build. Any change to `code_version` yields a
/// different measurement.
Digest measurement_for(EnclaveKind kind, std::string_view code_version);

struct EnclaveIdentity {
    std::string enclave_id;
    EnclaveKind kind = EnclaveKind::service;
    Digest measurement;
    Digest public_key;
    /// Whose network controls apply to this enclave's traffic.
    std::string host_id;
};

struct Session {
    std::uint64_t session_id = 0;
    std::string initiator;
    std::string peer;
    bool established = false;
};

struct EnlistmentRecord {
    std::string interface_id;
    std::string enclave_id;
    EnclaveKind kind = EnclaveKind::service;
    Digest public_key;
};

struct EscrowReceipt {
    std::string payment_id;
    std::string interface_id;
    std::string address;
};

/// Registry of enclave identities, attested sessions, enlistments and
/// escrowed payment keys. Attestation is a measurement comparison.
class Mesh {
public:
    /// Whether a handshake from one party can currently reach another.
    using Reachability = std::function<bool(const std::string& from, const std::string& to)>;

    explicit Mesh(std::set<Digest> genuine, Reachability reachable = {});

    void set_reachability(Reachability reachable) { reachable_ = std::move(reachable); }
    void add_enclave(EnclaveIdentity identity);
    const EnclaveIdentity* find(const std::string& enclave_id) const;
    bool is_genuine(const Digest& measurement) const { return genuine_.contains(measurement); }

    /// Establishes a session iff the target's measurement equals `expected`.
    /// Throws Error{unreachable} or Error{measurement_mismatch}; a failed
    /// attempt leaves no session behind.
    Session attest(const std::string& initiator, const Digest& expected, const std::string& target_id);
    bool has_session(const std::string& a, const std::string& b) const;

    /// Mutual attestation between an interface enclave and another enclave;
    /// both measurements must be in the genuine set. Idempotent.
    const EnlistmentRecord& enlist(const std::string& interface_id, const std::string& other_id);
    bool enlisted(const std::string& interface_id, const std::string& other_id) const;
    std::vector<EnlistmentRecord> registry(const std::string& interface_id) const;

    /// Stores a copy of a payment enclave's spend key with its interface.
    /// Throws Error{not_enlisted}.
    EscrowReceipt backup_keys(const std::string& payment_id, const std::string& interface_id,
                              const ledger::SpendKey& key);
    bool has_escrow(const std::string& interface_id, const std::string& address) const;

    /// Hands the escrowed key to the interface, but only once the payment
    /// enclave has been silent for at least `liveness_window`. Throws
    /// Error{recovery_refused} or Error{not_enlisted}.
    ledger::SpendKey release_escrow(const std::string& interface_id, const std::string& payment_id,
                                    const std::string& address, SimTime last_heartbeat, SimTime now,
                                    Duration liveness_window);

    void mark_swept(const std::string& address) { swept_.insert(address); }
    bool swept(const std::string& address) const { return swept_.contains(address); }

private:
    std::set<Digest> genuine_;
    Reachability reachable_;
    std::map<std::string, EnclaveIdentity> enclaves_;
    std::map<std::pair<std::string, std::string>, Session> sessions_;
    std::map<std::pair<std::string, std::string>, EnlistmentRecord> enlisted_;
    struct Escrow {
        std::string payment_id;
        ledger::SpendKey key;
    };
    std::map<std::pair<std::string, std::string>, Escrow> escrow_;
    std::set<std::string> swept_;
    std::uint64_t next_session_ = 1;
};

} // namespace teevil::attestation
