#pragma once

#include "enclave/campaign.hpp"

#include <optional>
#include <string>
#include <vector>

/// Payloads carried in simnet::Message::payload, one struct per kind.
namespace teevil::enclave::msg {

struct CampaignStart {
    CampaignSpec spec;
};

struct ChainQuery {
    std::uint64_t from_height = 0;
    std::uint64_t request_id = 0;
};

struct LatestBlock {
    std::vector<ledger::BlockHeader> headers;
    std::uint64_t request_id = 0;
};

struct SlotAssignment {
    std::int64_t slot_id = 0;
    std::string owner_id;
    std::string proxy_actor;
    std::string proxy_endpoint;
    Credential credential;
    Amount price;
};

struct BatchDispatch {
    std::string campaign_id;
    std::string interface_id;
    std::string service_id;
    ServiceAction action;
    Duration revert_window{0};
    std::vector<ledger::BlockHeader> renter_view;
    std::vector<SlotAssignment> slots;
};

/// One hop of the service pipeline. Travels end-to-end encrypted between
/// the service enclave and the service; the proxy only forwards it.
struct ServiceRequest {
    std::uint64_t token = 0;
    int exchange = 0;
    std::uint64_t pipeline = 0;
    Credential credential;
    ServiceAction action;
    std::string reply_to;
    /// Filled in by the proxy: where the service sees the request from.
    std::string source;
};

struct ServiceReply {
    std::uint64_t token = 0;
    int exchange = 0;
    std::uint64_t pipeline = 0;
    bool ok = true;
    std::string error;
    bool rejected_credentials = false;
    std::string reply_to;
    /// Latency drawn for this exchange.
    Duration latency{0};
};

struct SubstituteRequest {
    std::string campaign_id;
    std::int64_t slot_id = 0;
};

struct SubstituteReply {
    std::string campaign_id;
    std::int64_t slot_id = 0;
    std::optional<SlotAssignment> assignment;
};

struct SlotOutcome {
    std::int64_t slot_id = 0;
    std::string owner_id;
    Amount price;
    SlotStatus status = SlotStatus::pending;
    std::vector<std::pair<std::string, SlotStatus>> skipped;
    SimTime started{0};
    SimTime performed_at{0};
    SimTime finished{0};
    Duration pipeline_latency{0};
    std::vector<ledger::BlockHeader> owner_view;
    std::string failure;
    bool unverifiable = false;
};

struct BatchReport {
    std::string campaign_id;
    std::string service_enclave;
    std::vector<SlotOutcome> outcomes;
};

struct SettlementOrder {
    std::int64_t slot_id = 0;
    std::string owner_id;
    std::string owner_actor;
    std::string payout_address;
    Amount reward;
    Amount fee;
    Amount deposit;
};

/// share_index value addressing every share a payment enclave holds for a
/// campaign; used to wind a campaign down after its interface is lost.
inline constexpr std::size_t all_shares = static_cast<std::size_t>(-1);

struct PaymentInstruction {
    std::string campaign_id;
    std::string interface_id;
    std::size_t share_index = 0;
    ledger::NoteId head;
    Amount head_value;
    std::vector<SettlementOrder> settlements;
    Amount burn;
    std::string renter_actor;
    std::string refund_address;
};

struct PaymentDone {
    std::string campaign_id;
    std::size_t share_index = 0;
    std::vector<Digest> issued;
    std::optional<Digest> terminal_tx;
    std::optional<SimTime> last_reward_at;
};

struct Heartbeat {
    std::string enclave_id;
    std::vector<std::string> campaigns;
};

struct HeartbeatAck {
    std::string interface_id;
};

/// A settlement or refund transaction on one of its delivery paths.
struct TxCopy {
    ledger::Transaction tx;
    std::string campaign_id;
    std::int64_t slot_id = -1;
};

struct Poll {
    std::string owner_id;
    std::string proxy_endpoint;
};

struct PollAck {
    std::string interface_id;
};

/// Sent by a payment enclave to another interface node when the campaign's
/// own interface has gone silent.
struct RecoveryHandoff {
    std::string campaign_id;
    std::string failed_interface;
    std::string renter_actor;
    std::string refund_address;
    std::vector<std::string> payment_enclaves;
    std::vector<ledger::NoteId> share_heads;
    std::vector<Amount> share_values;
};

} // namespace teevil::enclave::msg
