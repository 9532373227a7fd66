#pragma once

#include "common/amount.hpp"
#include "common/time.hpp"
#include "services/service.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace teevil::enclave {

using services::ActionKind;
using services::Credential;
using services::ServiceAction;

struct Policy {
    std::string service_id;
    std::set<ActionKind> allowed_actions;
    /// Permitted targets (e.g. candidates of one party). Empty allows any.
    std::set<std::string> target_whitelist;
    Amount price_per_action;
    bool accepts_revert_window = true;
};

/// Throws std::invalid_argument for a non-positive price or an empty action set.
void validate_policy(const Policy& policy);

bool allows(const Policy& policy, const std::string& service_id, const ServiceAction& action,
            Duration revert_window);

struct ServiceEnrollment {
    Credential credential;
    Policy policy;
};

struct OwnerRecord {
    std::string owner_id;
    std::map<std::string, ServiceEnrollment> services;
    std::string payout_address;
    /// Actor that relays traffic for the owner, and the network endpoint the
    /// service sees requests arriving from.
    std::string proxy_actor;
    std::string proxy_endpoint;
    SimTime last_poll{0};
    std::string home_interface;
    /// Bumped on every re-enrollment or policy change; gossip keeps the
    /// highest version.
    std::uint64_t version = 1;
};

struct CompliantAccount {
    std::string owner_id;
    Amount price;
};

/// Accounts whose policy allows the action, fresh proxies only, ordered by
/// ascending price with ties broken by owner id.
std::vector<CompliantAccount> select_compliant(const std::vector<const OwnerRecord*>& owners,
                                               const std::string& service_id, const ServiceAction& action,
                                               Duration revert_window, SimTime now, Duration poll_interval);

struct Quote {
    Amount funds_upper_bound;
    Amount deposit_required;
    /// The min(count, available) highest prices, ascending.
    std::vector<Amount> budgets;
    std::size_t slots() const { return budgets.size(); }
    Amount total() const { return funds_upper_bound + deposit_required; }
};

/// Throws Error{no_compliant_accounts} when `prices` is empty.
Quote quote_from_prices(std::vector<Amount> prices, std::size_t count, Rate deposit_rate);

/// Slot i goes to enclave i mod E. Throws Error{no_service_enclaves}.
std::vector<std::vector<std::size_t>> partition_round_robin(std::size_t count, std::size_t enclaves);

/// Even split of `total` into P parts differing by at most one unit, larger
/// parts first. Throws Error{no_payment_enclaves}.
std::vector<Amount> even_split(Amount total, std::size_t parts);

/// Per-slot reward split: the maintainer fee is carved out of the price.
struct SlotAmounts {
    Amount reward;
    Amount fee;
};
SlotAmounts split_price(Amount price, Rate fee_rate);

struct ShareSchedule {
    /// Indices into CampaignSchedule::budgets, ascending.
    std::vector<std::size_t> entries;
    Amount value;
};

/// How funds are spread over payment enclaves. Budget entry j lives on share
/// j mod P and carries its budget plus one per-slot deposit; the deposit
/// remainder that does not divide evenly sits on share 0.
struct CampaignSchedule {
    std::vector<Amount> budgets;
    Amount deposit_per_slot;
    Amount deposit_remainder;
    std::vector<ShareSchedule> shares;

    Amount total() const;
    std::size_t share_of_entry(std::size_t entry) const { return entry % shares.size(); }
};

/// Throws Error{no_payment_enclaves}.
CampaignSchedule plan_schedule(const Quote& quote, std::size_t payment_enclaves);

struct SlotPrice {
    std::int64_t slot_id;
    Amount price;
};

/// Assigns the m confirmed slots, sorted by (price, slot id), to the m
/// highest budget entries in order. Returns entry index per input position.
/// Throws Error{insufficient_share} if a price exceeds its entry.
std::vector<std::size_t> match_confirmed(const std::vector<Amount>& budgets, std::vector<SlotPrice> confirmed,
                                         std::vector<std::int64_t>& slot_order);

} // namespace teevil::enclave
