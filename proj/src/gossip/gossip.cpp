#include "gossip/gossip.hpp"

namespace teevil::gossip {

bool NodeState::learn(const RecordPtr& record, SimTime now)
{
    auto it = known.find(record->owner_id);
    if (it != known.end() && it->second->version >= record->version)
        return false;
    known[record->owner_id] = record;
    learned_at[record->owner_id] = now;
    outbox.push_back(record->owner_id);
    return true;
}

std::vector<RecordPtr> NodeState::take_batch(std::size_t batch)
{
    std::vector<RecordPtr> out;
    while (!outbox.empty() && out.size() < batch) {
        auto it = known.find(outbox.front());
        outbox.pop_front();
        if (it != known.end())
            out.push_back(it->second);
    }
    return out;
}

States gossip_round(const Topology& topology, const States& states, std::size_t batch_size, SimTime now,
                    RoundStats* stats)
{
    States next = states;
    std::map<std::string, std::vector<RecordPtr>> sending;
    for (auto& [id, st] : next)
        sending[id] = st.take_batch(batch_size);
    for (const auto& [id, batch] : sending) {
        if (batch.empty())
            continue;
        for (const auto& peer : topology.peer_neighbors(id)) {
            auto it = next.find(peer);
            if (it == next.end())
                continue;
            if (stats) {
                ++stats->batches;
                stats->records_sent += batch.size();
            }
            for (const auto& rec : batch)
                it->second.learn(rec, now);
        }
    }
    return next;
}

} // namespace teevil::gossip
