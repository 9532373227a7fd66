#pragma once

#include "common/amount.hpp"
#include "common/digest.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace teevil::harness {

struct PartyAccount {
    std::string party;
    /// renter, owner, maintainer or escrow (coins held by enclaves).
    std::string role;
    std::string address;
    Amount start;
    Amount end;

    Amount delta() const { return end - start; }
};

struct SlotReport {
    std::int64_t slot_id = 0;
    std::string owner;
    Amount price;
    /// A slot status name, or "orphaned" when its interface died before
    /// learning the outcome.
    std::string status;
    std::vector<std::pair<std::string, std::string>> skipped;
    std::string failure;
    bool unverifiable = false;
    bool ghost = false;
    /// The action reached the service at some point.
    bool applied = false;
    /// Ground truth at the end of the run.
    bool effect_present = false;
    std::string share_enclave;
    std::string settlement_tx;
    bool settlement_landed = false;
    Amount reward;
    Amount deposit_share;
    Amount fee;
};

struct PhaseTimes {
    double service_s = 0;
    double payment_s = 0;
    double termination_s = 0;
};

struct CampaignReport {
    std::string id;
    std::string renter;
    std::string interface;
    std::string service;
    /// terminated, rejected, unfunded, lost (start never reached the
    /// interface) or unfinished.
    std::string outcome;
    std::string reason;
    bool forged_view = false;
    std::size_t count = 0;
    Amount funds_upper_bound;
    Amount deposit_required;
    Amount funding_landed;
    Amount deposit_returned;
    Amount deposit_burned;
    Amount refunded;
    Amount rewards_paid;
    Amount fees_paid;
    /// Coins still sitting at this campaign's funding or share addresses.
    Amount escrow_residual;
    PhaseTimes phases;
    std::vector<std::string> flags;
    std::vector<SlotReport> slots;
    std::vector<std::string> exposed_owners;
    std::vector<std::string> payment_enclaves;
};

struct DropReport {
    std::uint64_t msg_id = 0;
    std::string adversary;
    std::string kind;
    std::optional<int> cut_point;
    std::string campaign;
    std::int64_t slot = -1;
    std::string owner;
};

struct KillReport {
    std::string actor;
    std::string adversary;
    double at_s = 0;
};

struct EclipseReport {
    std::string owner;
    std::string adversary;
    std::string campaign;
};

struct RevertReport {
    std::string owner;
    std::size_t count = 0;
};

struct P2PReport {
    std::size_t registrations = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    struct Campaign {
        std::string id;
        std::size_t fulfilled = 0;
        std::size_t refunded_slots = 0;
        std::size_t reached = 0;
        std::size_t flood_messages = 0;
    };
    std::vector<Campaign> campaigns;
};

struct PartyVerdict {
    std::string party;
    std::string role;
    /// fair, harmed, advantaged, or fair(self-harm).
    std::string classification = "fair";
    std::vector<std::string> evidence;
};

struct Verdict {
    std::vector<PartyVerdict> parties;
    const PartyVerdict* find(const std::string& party) const;
};

struct Report {
    std::string scenario;
    std::uint64_t seed = 0;
    std::string mode;
    double end_time_s = 0;
    std::uint64_t chain_height = 0;
    std::vector<PartyAccount> parties;
    Amount burned;
    Amount fees_collected;
    std::vector<CampaignReport> campaigns;
    std::map<std::string, std::vector<std::string>> exposure;
    std::vector<DropReport> drops;
    std::vector<KillReport> kills;
    std::vector<EclipseReport> eclipses;
    std::vector<RevertReport> reverts;
    std::vector<std::string> enrollment_failures;
    std::optional<P2PReport> p2p;
    std::size_t event_count = 0;
    std::string event_log_digest;
    Verdict verdict;

    const CampaignReport* campaign(const std::string& id) const;
    Amount delta_sum() const;
};

nlohmann::json to_json(const Report& r);
/// Throws Error{schema_error} on a malformed document.
Report report_from_json(const nlohmann::json& j);
/// Hex SHA-256 of the canonical JSON form.
std::string report_digest(const Report& r);
std::string render_text(const Report& r);

} // namespace teevil::harness
