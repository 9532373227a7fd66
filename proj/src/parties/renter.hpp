#pragma once

#include "enclave/messages.hpp"
#include "enclave/runtime.hpp"

#include <memory>
#include <string>
#include <vector>

namespace teevil::parties {

/// A forked view the renter mines privately: its funding is confirmed
/// there, while the honest chain gets a transaction spending the same notes
/// back to the renter.
struct ForgedFunding {
    std::shared_ptr<const ledger::Chain> fork;
    ledger::Transaction funding;
    ledger::Transaction double_spend;
};

class Renter {
public:
    Renter(enclave::Runtime& rt, std::string renter_id, ledger::SpendKey wallet);

    const std::string& id() const { return id_; }
    const std::string& address() const { return wallet_.address; }

    /// Pays `value` to `to` from the wallet's spendable notes (change back).
    /// Throws Error{invalid_transaction} when the wallet is short.
    ledger::Transaction make_payment(const std::string& to, Amount value, const std::string& memo) const;
    void submit(const ledger::Transaction& tx);

    /// Builds a private fork off the current tip with the funding buried
    /// under `depth` blocks.
    ForgedFunding forge_funding(const std::string& to, Amount value, const std::string& memo, std::uint64_t depth) const;

    void handle(const simnet::Message& m);
    const std::vector<ledger::Transaction>& received() const { return received_; }

private:
    enclave::Runtime& rt_;
    std::string id_;
    ledger::SpendKey wallet_;
    std::vector<ledger::Transaction> received_;
};

} // namespace teevil::parties
