#pragma once

#include "enclave/policy.hpp"
#include "gossip/topology.hpp"
#include "services/service.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace teevil::gossip {

/// An owner-hosted combined enclave. The owner delegates credentials to the
/// enclave on their own machine, so actions leave from the owner's endpoint
/// without any proxy.
struct P2PNode {
    std::string node_id;
    std::string cpu_id;
    std::string endpoint;
    std::optional<std::string> owner_id;
    std::map<std::string, enclave::ServiceEnrollment> delegations;
};

enum class Registration { accepted, already_registered };

struct P2PCampaign {
    std::string campaign_id;
    std::string service_id;
    services::ServiceAction action;
    std::size_t count = 1;
    Duration revert_window{0};
};

struct P2PFulfillment {
    struct Slot {
        std::int64_t slot_id;
        std::string node_id;
        std::string owner_id;
        std::uint64_t receipt;
    };
    std::vector<Slot> fulfilled;
    /// Slots nobody could take; their funds go back to the renter.
    std::size_t refunded_slots = 0;
    std::set<std::string> reached;
    std::size_t flood_messages = 0;
    std::size_t duplicate_deliveries = 0;
};

class P2PNetwork {
public:
    explicit P2PNetwork(Topology topology);

    const Topology& topology() const { return topology_; }
    /// Adds the machine behind a topology node.
    void add_node(P2PNode node);
    const P2PNode* node(const std::string& id) const;

    /// Binds `owner` to `node` if no other owner holds the CPU anywhere in
    /// the network. Throws Error{cpu_already_bound} or Error{schema_error}
    /// (unknown node).
    Registration register_owner(const std::string& node_id, const std::string& owner_id, const std::string& cpu_id);
    std::size_t registered_owners() const { return cpu_owner_.size(); }
    const std::map<std::string, std::string>& cpu_bindings() const { return cpu_owner_; }

    void delegate(const std::string& node_id, const enclave::ServiceEnrollment& enrollment);

    /// Floods the campaign from `entry` (dedup by campaign id); each reached
    /// node with a compliant delegation performs one slot directly on the
    /// service, in flood order, until `count` slots are done. Throws
    /// Error{no_compliant_nodes}.
    P2PFulfillment broadcast_campaign(const std::string& entry, const P2PCampaign& campaign,
                                      const std::map<std::string, services::MockService*>& services);

private:
    Topology topology_;
    std::map<std::string, P2PNode> nodes_;
    std::map<std::string, std::string> cpu_owner_;
    std::map<std::string, std::set<std::string>> seen_campaigns_;
};

Registration register_owner_p2p(P2PNetwork& net, const std::string& node_id, const std::string& owner_id,
                                const std::string& cpu_id);

P2PFulfillment p2p_broadcast_campaign(P2PNetwork& net, const std::string& entry, const P2PCampaign& campaign,
                                      const std::map<std::string, services::MockService*>& services);

} // namespace teevil::gossip
