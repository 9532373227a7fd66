#pragma once

#include "attestation/mesh.hpp"
#include "enclave/campaign.hpp"
#include "enclave/messages.hpp"
#include "enclave/payment_enclave.hpp"
#include "enclave/runtime.hpp"
#include "enclave/service_enclave.hpp"
#include "gossip/gossip.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace teevil::enclave {

struct EnrollmentRequest {
    std::string owner_id;
    std::vector<ServiceEnrollment> services;
    std::string proxy_actor;
    std::string proxy_endpoint;
    std::string payout_address;
};

/// A campaign_start the interface refused, kept for the report.
struct RejectedStart {
    std::string campaign_id;
    std::string reason;
    SimTime at{0};
};

/// Takeover of a campaign whose own interface died (distributed mode).
struct Handoff {
    std::string campaign_id;
    std::string failed_interface;
    SimTime at{0};
    std::vector<msg::PaymentDone> closed;
};

class InterfaceEnclave {
public:
    /// Sends a nonce through the owner's proxy and reports whether it came back.
    using ProxyEcho = std::function<bool(const std::string& proxy_actor, const Digest& nonce)>;

    InterfaceEnclave(Runtime& rt, attestation::EnclaveIdentity identity);

    const std::string& id() const { return identity_.enclave_id; }
    const attestation::EnclaveIdentity& identity() const { return identity_; }

    /// Enlists an enclave via mutual attestation; throws
    /// Error{measurement_mismatch} and leaves it unregistered.
    void attach(ServiceEnclave& service);
    void attach(PaymentEnclave& payment);
    void set_peers(std::vector<std::string> peers) { peers_ = std::move(peers); }
    std::size_t service_enclaves() const { return services_.size(); }
    std::size_t payment_enclaves() const { return payments_.size(); }

    /// Requires an attested owner session. Validates the proxy by a nonce
    /// round trip and each credential by a test login. Services whose
    /// credential fails are left out; if any failed, Error{bad_credentials}
    /// names the first one after the rest are stored.
    std::string enroll_owner(const EnrollmentRequest& request, const ProxyEcho& echo);
    const OwnerRecord* owner(const std::string& owner_id) const;
    std::vector<const OwnerRecord*> known_owners() const;
    const std::map<std::string, OwnerRecord>& own_owners() const { return owners_; }

    /// Snapshot quote; start_campaign of the same campaign id selects only
    /// from the owners eligible here.
    Quote quote_campaign(const std::string& campaign_id, const std::string& service_id, const ServiceAction& action,
                         std::size_t count, Duration revert_window);
    /// Address the renter pays the campaign funding to.
    std::string funding_address(const std::string& campaign_id);

    /// Throws Error{unverified_funding} (headers, inclusion, depth or
    /// amount) and Error{no_compliant_accounts}.
    std::string start_campaign(const CampaignSpec& spec);
    std::vector<CompliantAccount> select_compliant(const Campaign& campaign) const;

    void handle(const simnet::Message& m);
    void gossip_tick();

    const std::map<std::string, Campaign>& campaigns() const { return campaigns_; }
    const std::vector<RejectedStart>& rejected() const { return rejected_; }
    const std::vector<Handoff>& handoffs() const { return handoffs_; }
    const gossip::NodeState& gossip_state() const { return gossip_; }

private:
    struct QuoteSnapshot {
        Quote quote;
        std::vector<std::string> eligible;
    };

    std::vector<CompliantAccount> compliant_for(const std::string& service_id, const ServiceAction& action,
                                                Duration revert_window, const std::vector<std::string>* only) const;
    msg::SlotAssignment assignment_for(const Campaign& c, std::int64_t slot, const std::string& owner_id) const;
    void dispatch(Campaign& c);
    void on_batch_report(const msg::BatchReport& report);
    void begin_payment(Campaign& c);
    void on_payment_done(const msg::PaymentDone& done);
    void watch(const std::string& campaign_id);
    void recover_share(Campaign& c, std::size_t index);
    void maybe_terminate(Campaign& c);
    void on_handoff(const msg::RecoveryHandoff& h);
    void send(simnet::MsgKind kind, const std::string& dst, std::any payload, const std::string& campaign = {},
              std::int64_t slot = -1);

    Runtime& rt_;
    attestation::EnclaveIdentity identity_;
    std::vector<ServiceEnclave*> services_;
    std::vector<PaymentEnclave*> payments_;
    std::vector<std::string> peers_;
    std::map<std::string, OwnerRecord> owners_;
    gossip::NodeState gossip_;
    std::map<std::string, QuoteSnapshot> quotes_;
    std::map<std::string, ledger::SpendKey> funding_keys_;
    std::map<std::string, Campaign> campaigns_;
    std::vector<RejectedStart> rejected_;
    std::vector<Handoff> handoffs_;
    std::uint64_t nonce_counter_ = 0;
};

} // namespace teevil::enclave
