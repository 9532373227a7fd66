#pragma once

#include "attestation/mesh.hpp"
#include "enclave/interface_enclave.hpp"
#include "enclave/payment_enclave.hpp"
#include "enclave/service_enclave.hpp"
#include "harness/report.hpp"
#include "harness/scenario.hpp"
#include "ledger/ledger_node.hpp"
#include "parties/owner.hpp"
#include "parties/renter.hpp"
#include "parties/service_host.hpp"
#include "simnet/simnet.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace teevil::harness {

/// Code version every genuine enclave is built from.
inline constexpr std::string_view enclave_code_version = "teevil-1";

/// One simulation instance: ledger, enclaves, services and parties wired to
/// a single simnet. Setup (enrollment, attestation) happens in the
/// constructor; run() advances virtual time until every campaign is
/// resolved and the ledger has drained, or stop_after_s.
class World {
public:
    explicit World(ScenarioConfig config);
    ~World();
    World(const World&) = delete;
    World& operator=(const World&) = delete;

    void run();
    Report report() const;

    const ScenarioConfig& config() const { return cfg_; }
    simnet::Simnet& net() { return net_; }
    const simnet::Simnet& net() const { return net_; }
    ledger::LedgerNode& ledger() { return *ledger_; }
    const ledger::LedgerNode& ledger() const { return *ledger_; }
    std::size_t interface_count() const { return ifaces_.size(); }
    enclave::InterfaceEnclave& interface(std::size_t i) { return *ifaces_.at(i); }
    const enclave::InterfaceEnclave& interface(std::size_t i) const { return *ifaces_.at(i); }
    services::MockService* service(const std::string& id) const;
    const parties::Owner* owner(const std::string& id) const;
    const std::vector<std::unique_ptr<parties::Owner>>& owners() const { return owners_; }

private:
    struct Track {
        CampaignConfig cfg;
        services::ServiceAction action;
        /// pending, funding, started, rejected, unfunded, lost
        std::string state = "pending";
        std::string reason;
        std::optional<enclave::Quote> quote;
        std::string funding_address;
        std::optional<ledger::Transaction> funding_tx;
        std::optional<parties::ForgedFunding> forged;
    };

    void build_centralized_or_distributed();
    void build_p2p();
    void setup_owners();
    void setup_adversary();
    bool enroll(parties::Owner& owner, std::size_t interface_index);
    void reenroll(parties::Owner& owner);
    void begin_campaign(Track& t);
    void send_start(Track& t, const std::vector<ledger::BlockHeader>& view, const ledger::InclusionProof& proof,
                    const ledger::Transaction& funding);
    void mine();
    bool resolved(const Track& t) const;
    bool shares_closed(const enclave::Campaign& c) const;
    void apply_eclipses();
    std::size_t interface_index(const std::string& id) const;

    ScenarioConfig cfg_;
    simnet::Simnet net_;
    std::shared_ptr<ledger::KeyRegistry> keys_;
    std::unique_ptr<ledger::Chain> genesis_;
    std::unique_ptr<ledger::LedgerNode> ledger_;
    std::unique_ptr<attestation::Mesh> mesh_;
    std::vector<std::unique_ptr<services::MockService>> services_;
    std::unique_ptr<enclave::Runtime> rt_;
    std::vector<std::unique_ptr<enclave::InterfaceEnclave>> ifaces_;
    std::vector<std::unique_ptr<enclave::ServiceEnclave>> service_enclaves_;
    std::vector<std::unique_ptr<enclave::PaymentEnclave>> payment_enclaves_;
    std::vector<std::unique_ptr<parties::ServiceHost>> hosts_;
    std::vector<std::unique_ptr<parties::Owner>> owners_;
    std::map<std::string, parties::Owner*> owner_index_;
    std::map<std::string, std::unique_ptr<parties::Renter>> renters_;
    std::vector<Track> tracks_;
    std::vector<Directive> pending_eclipses_;
    std::vector<EclipseReport> eclipses_;
    std::vector<std::string> enrollment_failures_;
    std::optional<P2PReport> p2p_;
    std::size_t drain_blocks_ = 0;
    bool draining_ = false;
    bool stopped_ = false;
};

struct RunOutput {
    Report report;
    std::string event_log;
};

RunOutput run_scenario(const ScenarioConfig& config);

/// A colluding service plants a hidden item and buys one action on it from
/// every owner enrolled with it; returns the owners it can then name.
std::vector<std::string> run_deanonymization_campaign(const ScenarioConfig& base, const std::string& service_id);

/// Event-log file: a version line, the canonical config, then the log.
std::string event_log_file(const ScenarioConfig& config, const std::string& event_log);

} // namespace teevil::harness
