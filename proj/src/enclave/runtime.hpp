#pragma once

#include "attestation/mesh.hpp"
#include "common/amount.hpp"
#include "common/time.hpp"
#include "ledger/ledger_node.hpp"
#include "services/service.hpp"
#include "simnet/simnet.hpp"

#include <array>
#include <map>
#include <memory>
#include <string>

namespace teevil::enclave {

struct LatencyDist {
    double mean_s = 0.0;
    double sd_s = 0.0;

    /// Normal draw truncated at zero; exact mean when sd is zero.
    Duration draw(simnet::Simnet& net) const;
};

struct LatencyModel {
    std::array<LatencyDist, services::MockService::pipeline_length> requests{{
        {1.202, 0.249}, {0.402, 0.128}, {0.769, 0.197}, {1.560, 0.298}, {0.355, 0.329}}};
    LatencyDist snark{4.935, 0.1141};
    Duration link{0};

    double mean_action_s() const;
};

struct Params {
    unsigned difficulty_bits = 12;
    unsigned confirmations = 6;
    std::size_t view_headers = 10;
    Duration block_interval = seconds(75);

    Rate deposit_rate = Rate::from_ppm(100'000);
    Rate fee_rate = Rate::from_ppm(50'000);
    std::string maintainer_address = "maintainer";

    Duration poll_interval = seconds(600);
    Duration poll_period = seconds(300);
    Duration liveness_window = seconds(30);
    Duration heartbeat_interval = seconds(10);
    Duration gate_timeout = seconds(5);
    /// Zero means three times the mean action latency.
    Duration response_timeout{0};
    Duration gossip_interval = seconds(60);
    std::size_t gossip_batch = 64;

    LatencyModel latency;

    Duration effective_response_timeout() const
    {
        return response_timeout > Duration{0} ? response_timeout : seconds(3.0 * latency.mean_action_s());
    }
};

/// Handles every actor needs. Owned by the world; actors keep a reference.
struct Runtime {
    simnet::Simnet& net;
    ledger::LedgerNode& ledger;
    std::shared_ptr<ledger::KeyRegistry> keys;
    attestation::Mesh& mesh;
    std::map<std::string, services::MockService*> services;
    const Params& params;
    std::uint64_t seed = 0;

    services::MockService* service(const std::string& id) const
    {
        auto it = services.find(id);
        return it == services.end() ? nullptr : it->second;
    }
};

/// Actor id of the ledger gateway that accepts broadcast transactions.
inline constexpr const char* ledger_actor = "ledger";

} // namespace teevil::enclave
