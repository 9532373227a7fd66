#include "gossip/topology.hpp"

#include "common/error.hpp"

#include <algorithm>

namespace teevil::gossip {

using attestation::EnclaveKind;

std::string to_string(Mode mode)
{
    switch (mode) {
    case Mode::centralized: return "centralized";
    case Mode::distributed: return "distributed";
    case Mode::p2p: return "p2p";
    }
    return "?";
}

std::optional<Mode> mode_from_string(const std::string& text)
{
    for (Mode m : {Mode::centralized, Mode::distributed, Mode::p2p})
        if (to_string(m) == text)
            return m;
    return std::nullopt;
}

std::vector<std::string> Topology::neighbors(const std::string& id) const
{
    std::vector<std::string> out;
    for (const auto& [a, b] : edges) {
        if (a == id)
            out.push_back(b);
        else if (b == id)
            out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::string> Topology::peer_neighbors(const std::string& id) const
{
    auto self = nodes.find(id);
    if (self == nodes.end())
        return {};
    std::vector<std::string> out;
    for (const auto& n : neighbors(id)) {
        auto it = nodes.find(n);
        if (it != nodes.end() && it->second == self->second)
            out.push_back(n);
    }
    return out;
}

std::vector<std::string> Topology::nodes_of(EnclaveKind kind) const
{
    std::vector<std::string> out;
    for (const auto& [id, k] : nodes)
        if (k == kind)
            out.push_back(id);
    return out;
}

std::vector<std::string> Topology::attached(const std::string& interface_id, EnclaveKind kind) const
{
    std::vector<std::string> out;
    for (const auto& n : neighbors(interface_id)) {
        auto it = nodes.find(n);
        if (it != nodes.end() && it->second == kind)
            out.push_back(n);
    }
    return out;
}

void validate_topology(const Topology& t)
{
    for (const auto& [a, b] : t.edges) {
        if (!t.nodes.contains(a))
            throw Error(ErrorCode::schema_error, "topology.edges: unknown node " + a);
        if (!t.nodes.contains(b))
            throw Error(ErrorCode::schema_error, "topology.edges: unknown node " + b);
        if (a == b)
            throw Error(ErrorCode::schema_error, "topology.edges: self loop at " + a);
    }
    switch (t.mode) {
    case Mode::centralized:
        if (t.nodes_of(EnclaveKind::interface).size() != 1)
            throw Error(ErrorCode::schema_error, "topology: centralized mode needs exactly one interface node");
        break;
    case Mode::distributed:
        for (const auto& iface : t.nodes_of(EnclaveKind::interface)) {
            if (t.attached(iface, EnclaveKind::service).empty())
                throw Error(ErrorCode::schema_error, "topology: " + iface + " reaches no service enclave");
            if (t.attached(iface, EnclaveKind::payment).empty())
                throw Error(ErrorCode::schema_error, "topology: " + iface + " reaches no payment enclave");
        }
        break;
    case Mode::p2p:
        for (const auto& [id, kind] : t.nodes)
            if (kind != EnclaveKind::combined)
                throw Error(ErrorCode::schema_error, "topology: p2p node " + id + " must be combined");
        break;
    }
}

} // namespace teevil::gossip
