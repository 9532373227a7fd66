#pragma once

#include "common/amount.hpp"
#include "common/error.hpp"
#include "common/time.hpp"
#include "enclave/runtime.hpp"
#include "gossip/topology.hpp"
#include "services/service.hpp"
#include "services/voting_service.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace teevil::harness {

struct SchemaViolation {
    std::string field;
    std::string cause;
};

/// Carries every violation found, not just the first.
class SchemaError : public Error {
public:
    explicit SchemaError(std::vector<SchemaViolation> violations);
    const std::vector<SchemaViolation>& violations() const { return violations_; }

private:
    std::vector<SchemaViolation> violations_;
};

struct TopologyConfig {
    gossip::Mode mode = gossip::Mode::centralized;
    std::size_t interfaces = 1;
    /// Per interface node.
    std::size_t service_enclaves = 1;
    std::size_t payment_enclaves = 1;
    /// Interface graph for distributed mode; empty means a line.
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

struct ItemConfig {
    std::string id;
    bool hidden = false;
};

struct ServiceConfig {
    std::string id;
    enum class Kind { social, voting } kind = Kind::social;
    services::VotePolicy vote_policy = services::VotePolicy::first_counts;
    std::vector<std::string> candidates;
    std::vector<ItemConfig> items;
    bool colluding = false;
};

struct OwnerProfileConfig {
    bool drops_nonce = false;
    bool cuts_responses = false;
    bool reverts_actions = false;
    double revert_delay_s = 60;
    /// Candidate the owner votes for directly before any campaign.
    std::string prevote;
};

struct OwnerGroup {
    std::string prefix = "owner";
    std::size_t count = 1;
    Amount price;
    /// Added per owner index within the group.
    Amount price_step;
    std::vector<std::string> services;
    std::vector<services::ActionKind> actions;
    std::vector<std::string> targets;
    bool accepts_revert_window = true;
    std::size_t home = 0;
    /// Accounts the service itself created (collusion).
    bool ghost = false;
    OwnerProfileConfig profile;
    /// P2P mode: nodes of this group share one CPU identity when set.
    std::string cpu;
};

struct RenterConfig {
    std::string id;
    Amount balance;
};

struct CampaignConfig {
    std::string id;
    std::string renter;
    std::string service;
    services::ServiceAction action;
    std::size_t count = 1;
    double revert_window_s = 0;
    double start_at_s = 0;
    std::size_t interface = 0;
    /// Fund on a private fork and double-spend on the honest chain.
    bool forged_view = false;
    /// The service plants a fresh hidden item and the campaign targets it.
    bool hidden_target = false;
};

enum class DirectiveKind { cut, drop, delay, kill, revive, eclipse, collusion };

struct Directive {
    DirectiveKind kind = DirectiveKind::cut;
    double at_s = 0;
    std::optional<double> until_s;
    std::string adversary = "host";
    std::optional<int> cut_point;
    std::optional<simnet::MsgKind> msg_kind;
    std::optional<std::string> owner;
    std::optional<std::string> campaign;
    std::optional<std::string> src;
    std::optional<std::string> dst;
    std::optional<int> exchange;
    double extra_s = 0;
    /// Actor for kill/revive; service for collusion.
    std::string target;
    bool on = true;
};

struct ScenarioConfig {
    std::string name = "scenario";
    std::uint64_t seed = 1;
    TopologyConfig topology;
    enclave::Params params;
    std::vector<ServiceConfig> services;
    std::vector<OwnerGroup> owner_groups;
    std::vector<RenterConfig> renters;
    std::vector<CampaignConfig> campaigns;
    std::vector<Directive> adversary;
    double stop_after_s = 6 * 3600;
    /// Give-up time for a campaign_start that never reached its interface.
    double start_timeout_s = 120;
};

/// Throws SchemaError listing every violation.
ScenarioConfig parse_scenario(const nlohmann::json& j);
/// Throws Error{io_error} or SchemaError.
ScenarioConfig load_scenario(const std::string& path);
/// Canonical form; parse_scenario(to_json(c)) reproduces c.
nlohmann::json to_json(const ScenarioConfig& c);

} // namespace teevil::harness
