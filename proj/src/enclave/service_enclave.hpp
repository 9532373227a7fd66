#pragma once

#include "attestation/mesh.hpp"
#include "enclave/messages.hpp"
#include "enclave/runtime.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace teevil::enclave {

enum class GateResult { pass, inconsistent, unreachable };

/// The per-owner consistency gate. A missing reply is `unreachable`; an
/// invalid or forked owner view is `inconsistent`.
GateResult gate_owner_chain(const std::optional<std::vector<ledger::BlockHeader>>& owner_view,
                            const std::vector<ledger::BlockHeader>& renter_view, unsigned difficulty_bits);

/// Checks an action's public effect from an independent account. Throws
/// Error{not_observable} for services without public state.
bool verify_external(const services::MockService& service, const std::string& account, const ServiceAction& action);

/// Runs dispatched batches: gate, five-exchange pipeline through the owner's
/// proxy, revert-window check, external verification, then one report per
/// batch back to the interface enclave.
class ServiceEnclave {
public:
    ServiceEnclave(Runtime& rt, attestation::EnclaveIdentity identity);

    const std::string& id() const { return identity_.enclave_id; }
    const attestation::EnclaveIdentity& identity() const { return identity_; }
    void handle(const simnet::Message& m);
    std::size_t active_batches() const { return batches_.size(); }

private:
    enum class Stage { idle, gating, substituting, pipeline, done };

    struct Batch {
        msg::BatchDispatch dispatch;
        std::size_t next = 0;
        Stage stage = Stage::idle;
        msg::SlotAssignment current;
        msg::SlotOutcome outcome;
        std::uint64_t request_id = 0;
        std::uint64_t token = 0;
        std::uint64_t service_pipeline = 0;
        std::size_t open_windows = 0;
        std::vector<msg::SlotOutcome> finished;
    };

    void start_next(const std::string& campaign);
    void begin_gate(Batch& b);
    void on_latest_block(const simnet::Message& m);
    void skip(Batch& b, SlotStatus why);
    void on_substitute(const simnet::Message& m);
    void begin_pipeline(Batch& b);
    void send_exchange(Batch& b, int exchange);
    void on_response(const simnet::Message& m);
    void on_performed(Batch& b);
    void close_window(const std::string& campaign, msg::SlotOutcome outcome, bool visible_at_perform,
                      const std::string& account);
    void finish_slot(Batch& b, SlotStatus status, std::string failure = {});
    void maybe_report(const std::string& campaign);
    void heartbeat_loop();
    simnet::Message make(simnet::MsgKind kind, const std::string& dst, const Batch& b) const;

    Runtime& rt_;
    attestation::EnclaveIdentity identity_;
    std::map<std::string, Batch> batches_;
    std::uint64_t next_id_ = 1;
    bool heartbeating_ = false;
};

} // namespace teevil::enclave
