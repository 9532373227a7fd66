#pragma once

#include "common/time.hpp"
#include "enclave/policy.hpp"
#include "gossip/topology.hpp"

#include <deque>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace teevil::gossip {

using RecordPtr = std::shared_ptr<const enclave::OwnerRecord>;

/// One interface node's view of the owner population.
struct NodeState {
    std::map<std::string, RecordPtr> known;
    /// Records learned but not yet forwarded, oldest first.
    std::deque<std::string> outbox;
    std::map<std::string, SimTime> learned_at;

    /// Adds or refreshes a record; a refreshed or new record is queued for
    /// forwarding. Returns true if anything changed.
    bool learn(const RecordPtr& record, SimTime now);
    /// Up to `batch` queued records, removed from the outbox.
    std::vector<RecordPtr> take_batch(std::size_t batch);
};

using States = std::map<std::string, NodeState>;

struct RoundStats {
    std::size_t records_sent = 0;
    std::size_t batches = 0;
};

/// Every node forwards one batch of newly learned records to each peer
/// neighbour; receivers merge. Nodes absent from `states` are skipped.
States gossip_round(const Topology& topology, const States& states, std::size_t batch_size, SimTime now = SimTime{0},
                    RoundStats* stats = nullptr);

} // namespace teevil::gossip
