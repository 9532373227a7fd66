#pragma once

#include "enclave/policy.hpp"
#include "ledger/chain.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace teevil::enclave {

enum class SlotStatus {
    pending,
    skipped_inconsistent,
    skipped_unreachable,
    performed,
    confirmed,
    reverted,
    timeout,
    failed,
};

std::string to_string(SlotStatus status);
bool is_final(SlotStatus status);
/// Legal lifecycle edges: pending to skipped or performed, performed to a
/// verdict. `failed` may also follow pending (rejected pipelines).
bool valid_transition(SlotStatus from, SlotStatus to);

struct CampaignSpec {
    std::string campaign_id;
    std::string service_id;
    ServiceAction action;
    std::size_t count = 1;
    Duration revert_window{0};
    std::string renter_id;
    std::string renter_refund_address;
    std::vector<ledger::BlockHeader> renter_chain_view;
    ledger::Transaction funding_tx;
    ledger::InclusionProof funding_proof;
};

struct ActionRecord {
    std::int64_t slot_id = 0;
    std::string owner_id;
    Amount price;
    SlotStatus status = SlotStatus::pending;
    /// Owners tried for this slot and skipped, in order.
    std::vector<std::pair<std::string, SlotStatus>> skipped;
    std::string service_enclave;
    SimTime started{0};
    SimTime performed_at{0};
    SimTime finished{0};
    /// Sum of the per-exchange latencies drawn for the pipeline.
    Duration pipeline_latency{0};
    /// The owner's view that passed the consistency gate.
    std::vector<ledger::BlockHeader> owner_view;
    std::string failure;
    /// Confirmed on the service's word alone (unobservable action).
    bool unverifiable = false;
    std::optional<Digest> reward_tx_id;
    std::optional<std::size_t> budget_entry;
};

enum class CampaignStatus { created, funded, running, terminated };
std::string to_string(CampaignStatus status);

struct ShareState {
    std::string payment_enclave;
    std::string address;
    Amount value;
    std::vector<std::size_t> entries;
    SimTime last_heartbeat{0};
    bool instructed = false;
    bool done = false;
    bool recovered = false;
    std::vector<Digest> issued;
    std::optional<Digest> terminal_tx;
    Amount burn;
};

struct Campaign {
    CampaignSpec spec;
    std::string interface_id;
    Quote quote;
    CampaignSchedule schedule;
    CampaignStatus status = CampaignStatus::created;
    std::vector<ActionRecord> slots;
    std::vector<ShareState> shares;
    Digest split_tx_id;
    std::vector<std::string> substitutes;
    std::set<std::string> used_owners;
    std::set<std::string> outstanding_batches;
    std::map<std::string, SimTime> service_heartbeat;
    std::vector<std::string> flags;

    SimTime started_at{0};
    SimTime dispatched_at{0};
    std::optional<SimTime> service_done_at;
    std::optional<SimTime> payment_started_at;
    std::optional<SimTime> last_reward_at;
    std::optional<SimTime> terminated_at;

    /// Enclave-side deposit ledger, in units.
    Amount deposit_returned;
    Amount deposit_burned;
    Amount deposit_refunded;
    Amount rewards_scheduled;
    Amount fees_scheduled;
};

} // namespace teevil::enclave
