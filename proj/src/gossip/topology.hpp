#pragma once

#include "attestation/mesh.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace teevil::gossip {

enum class Mode { centralized, distributed, p2p };

std::string to_string(Mode mode);
std::optional<Mode> mode_from_string(const std::string& text);

struct Topology {
    Mode mode = Mode::centralized;
    std::map<std::string, attestation::EnclaveKind> nodes;
    std::vector<std::pair<std::string, std::string>> edges;

    void add_node(const std::string& id, attestation::EnclaveKind kind) { nodes[id] = kind; }
    void add_edge(const std::string& a, const std::string& b) { edges.emplace_back(a, b); }

    std::vector<std::string> neighbors(const std::string& id) const;
    /// Neighbours of the same kind as `id`'s gossip peers: interface nodes
    /// in distributed mode, combined nodes in p2p mode.
    std::vector<std::string> peer_neighbors(const std::string& id) const;
    std::vector<std::string> nodes_of(attestation::EnclaveKind kind) const;
    /// Service and payment enclaves adjacent to an interface node.
    std::vector<std::string> attached(const std::string& interface_id, attestation::EnclaveKind kind) const;
};

/// Throws Error{schema_error}: unknown edge endpoints, self loops, or (in
/// distributed mode) an interface node without an adjacent service and
/// payment enclave; p2p mode allows combined nodes only.
void validate_topology(const Topology& topology);

} // namespace teevil::gossip
