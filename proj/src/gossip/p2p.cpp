#include "gossip/p2p.hpp"

#include "common/error.hpp"

#include <deque>

namespace teevil::gossip {

P2PNetwork::P2PNetwork(Topology topology) : topology_(std::move(topology)) {}

void P2PNetwork::add_node(P2PNode node)
{
    auto id = node.node_id;
    nodes_[id] = std::move(node);
}

const P2PNode* P2PNetwork::node(const std::string& id) const
{
    auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : &it->second;
}

Registration P2PNetwork::register_owner(const std::string& node_id, const std::string& owner_id,
                                        const std::string& cpu_id)
{
    if (topology_.mode != Mode::p2p)
        throw Error(ErrorCode::schema_error, "owner registration outside p2p mode");
    auto it = nodes_.find(node_id);
    if (it == nodes_.end())
        throw Error(ErrorCode::schema_error, "unknown p2p node " + node_id);
    auto bound = cpu_owner_.find(cpu_id);
    if (bound != cpu_owner_.end()) {
        if (bound->second == owner_id)
            return Registration::already_registered;
        throw Error(ErrorCode::cpu_already_bound, cpu_id + " belongs to " + bound->second);
    }
    cpu_owner_.emplace(cpu_id, owner_id);
    it->second.owner_id = owner_id;
    it->second.cpu_id = cpu_id;
    return Registration::accepted;
}

void P2PNetwork::delegate(const std::string& node_id, const enclave::ServiceEnrollment& enrollment)
{
    nodes_.at(node_id).delegations[enrollment.credential.service_id] = enrollment;
}

P2PFulfillment P2PNetwork::broadcast_campaign(const std::string& entry, const P2PCampaign& campaign,
                                              const std::map<std::string, services::MockService*>& services)
{
    P2PFulfillment out;
    auto svc_it = services.find(campaign.service_id);
    services::MockService* svc = svc_it == services.end() ? nullptr : svc_it->second;

    // Breadth-first flood; every edge carries the announcement once in each
    // direction, and a node acts only on its first copy.
    std::deque<std::string> frontier{entry};
    ++out.flood_messages;
    std::int64_t next_slot = 0;
    std::size_t compliant = 0;
    while (!frontier.empty()) {
        std::string id = frontier.front();
        frontier.pop_front();
        if (!seen_campaigns_[id].insert(campaign.campaign_id).second) {
            ++out.duplicate_deliveries;
            continue;
        }
        out.reached.insert(id);
        for (const auto& n : topology_.peer_neighbors(id)) {
            ++out.flood_messages;
            frontier.push_back(n);
        }
        auto node_it = nodes_.find(id);
        if (node_it == nodes_.end() || !node_it->second.owner_id)
            continue;
        const P2PNode& node = node_it->second;
        auto del = node.delegations.find(campaign.service_id);
        if (del == node.delegations.end() ||
            !enclave::allows(del->second.policy, campaign.service_id, campaign.action, campaign.revert_window))
            continue;
        ++compliant;
        if (static_cast<std::size_t>(next_slot) >= campaign.count || !svc)
            continue;
        try {
            auto conf = svc->execute_pipeline(del->second.credential, campaign.action, node.endpoint);
            out.fulfilled.push_back({next_slot++, id, *node.owner_id, conf.receipt});
        } catch (const Error&) {
        }
    }
    if (compliant == 0)
        throw Error(ErrorCode::no_compliant_nodes, campaign.campaign_id);
    out.refunded_slots = campaign.count - out.fulfilled.size();
    return out;
}

Registration register_owner_p2p(P2PNetwork& net, const std::string& node_id, const std::string& owner_id,
                                const std::string& cpu_id)
{
    return net.register_owner(node_id, owner_id, cpu_id);
}

P2PFulfillment p2p_broadcast_campaign(P2PNetwork& net, const std::string& entry, const P2PCampaign& campaign,
                                      const std::map<std::string, services::MockService*>& services)
{
    return net.broadcast_campaign(entry, campaign, services);
}

} // namespace teevil::gossip
