#pragma once

#include "enclave/interface_enclave.hpp"
#include "enclave/messages.hpp"
#include "enclave/runtime.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace teevil::parties {

struct OwnerProfile {
    /// Silently drops the enrollment nonce, so the proxy never validates.
    bool drops_nonce = false;
    /// Drops the final service response it relays (installed as a network
    /// rule by the harness).
    bool cuts_responses = false;
    /// Undoes each action some time after it lands.
    bool reverts_actions = false;
    Duration revert_delay = seconds(60);
};

/// An account owner together with the proxy it runs on its own machine.
/// The proxy relays service traffic it cannot read, answers chain queries
/// from whatever chain its node follows, and submits settlement copies.
class Owner {
public:
    using ReEnroll = std::function<void(Owner&)>;

    Owner(enclave::Runtime& rt, std::string owner_id, OwnerProfile profile, std::string payout_address);

    const std::string& id() const { return id_; }
    const std::string& proxy_actor() const { return id_; }
    std::string proxy_endpoint() const { return "ip-" + id_; }
    const std::string& payout_address() const { return payout_; }
    const OwnerProfile& profile() const { return profile_; }

    void add_account(services::Credential credential, enclave::Policy policy);
    enclave::EnrollmentRequest enrollment() const;
    bool echo_nonce(const Digest& nonce) const;

    void set_home(const std::string& interface_id) { home_ = interface_id; }
    const std::string& home() const { return home_; }
    /// Polls the home interface every poll period; a missed ack triggers
    /// `reenroll`.
    void start_polling(ReEnroll reenroll);

    void handle(const simnet::Message& m);

    const std::vector<ledger::Transaction>& received() const { return received_; }
    std::size_t reverts() const { return reverts_; }

private:
    void poll();
    std::vector<ledger::BlockHeader> chain_headers(std::uint64_t from) const;

    enclave::Runtime& rt_;
    std::string id_;
    OwnerProfile profile_;
    std::string payout_;
    std::vector<enclave::ServiceEnrollment> accounts_;
    std::string home_;
    ReEnroll reenroll_;
    bool polling_ = false;
    std::uint64_t poll_seq_ = 0;
    std::uint64_t acked_seq_ = 0;
    std::vector<ledger::Transaction> received_;
    std::size_t reverts_ = 0;
};

} // namespace teevil::parties
