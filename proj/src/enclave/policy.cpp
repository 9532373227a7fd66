#include "enclave/policy.hpp"

#include "common/error.hpp"

#include <algorithm>
#include <stdexcept>

namespace teevil::enclave {

void validate_policy(const Policy& policy)
{
    if (policy.price_per_action <= Amount{})
        throw std::invalid_argument("price_per_action must be positive");
    if (policy.allowed_actions.empty())
        throw std::invalid_argument("policy allows no action");
}

bool allows(const Policy& policy, const std::string& service_id, const ServiceAction& action,
            Duration revert_window)
{
    if (policy.service_id != service_id || !policy.allowed_actions.contains(action.kind))
        return false;
    if (!policy.target_whitelist.empty() && !policy.target_whitelist.contains(action.target))
        return false;
    if (revert_window > Duration{0} && !policy.accepts_revert_window)
        return false;
    return true;
}

std::vector<CompliantAccount> select_compliant(const std::vector<const OwnerRecord*>& owners,
                                               const std::string& service_id, const ServiceAction& action,
                                               Duration revert_window, SimTime now, Duration poll_interval)
{
    std::vector<CompliantAccount> out;
    for (const OwnerRecord* o : owners) {
        if (now - o->last_poll > poll_interval)
            continue;
        auto it = o->services.find(service_id);
        if (it == o->services.end() || !allows(it->second.policy, service_id, action, revert_window))
            continue;
        out.push_back(CompliantAccount{o->owner_id, it->second.policy.price_per_action});
    }
    std::sort(out.begin(), out.end(), [](const CompliantAccount& a, const CompliantAccount& b) {
        return a.price != b.price ? a.price < b.price : a.owner_id < b.owner_id;
    });
    return out;
}

Quote quote_from_prices(std::vector<Amount> prices, std::size_t count, Rate deposit_rate)
{
    if (prices.empty() || count == 0)
        throw Error(ErrorCode::no_compliant_accounts, "no account can perform the action");
    std::sort(prices.begin(), prices.end());
    std::size_t k = std::min(count, prices.size());
    Quote q;
    q.budgets.assign(prices.end() - static_cast<std::ptrdiff_t>(k), prices.end());
    for (Amount p : q.budgets)
        q.funds_upper_bound += p;
    q.deposit_required = deposit_rate.apply_floor(q.funds_upper_bound);
    return q;
}

std::vector<std::vector<std::size_t>> partition_round_robin(std::size_t count, std::size_t enclaves)
{
    if (enclaves == 0)
        throw Error(ErrorCode::no_service_enclaves, "no service enclave enlisted");
    std::vector<std::vector<std::size_t>> out(enclaves);
    for (std::size_t i = 0; i < count; ++i)
        out[i % enclaves].push_back(i);
    return out;
}

std::vector<Amount> even_split(Amount total, std::size_t parts)
{
    if (parts == 0)
        throw Error(ErrorCode::no_payment_enclaves, "no payment enclave enlisted");
    auto n = static_cast<std::int64_t>(parts);
    std::int64_t base = total.units() / n;
    std::int64_t extra = total.units() % n;
    std::vector<Amount> out;
    for (std::int64_t i = 0; i < n; ++i)
        out.push_back(Amount::from_units(base + (i < extra ? 1 : 0)));
    return out;
}

SlotAmounts split_price(Amount price, Rate fee_rate)
{
    Amount fee = fee_rate.apply_floor(price);
    return SlotAmounts{price - fee, fee};
}

Amount CampaignSchedule::total() const
{
    Amount sum;
    for (const auto& s : shares)
        sum += s.value;
    return sum;
}

CampaignSchedule plan_schedule(const Quote& quote, std::size_t payment_enclaves)
{
    if (payment_enclaves == 0)
        throw Error(ErrorCode::no_payment_enclaves, "no payment enclave enlisted");
    CampaignSchedule s;
    s.budgets = quote.budgets;
    auto k = static_cast<std::int64_t>(quote.slots());
    s.deposit_per_slot = k ? Amount::from_units(quote.deposit_required.units() / k) : Amount{};
    s.deposit_remainder = quote.deposit_required - s.deposit_per_slot * k;
    s.shares.resize(std::min<std::size_t>(payment_enclaves, std::max<std::size_t>(quote.slots(), 1)));
    for (std::size_t j = 0; j < s.budgets.size(); ++j) {
        auto& share = s.shares[s.share_of_entry(j)];
        share.entries.push_back(j);
        share.value += s.budgets[j] + s.deposit_per_slot;
    }
    s.shares[0].value += s.deposit_remainder;
    return s;
}

std::vector<std::size_t> match_confirmed(const std::vector<Amount>& budgets, std::vector<SlotPrice> confirmed,
                                         std::vector<std::int64_t>& slot_order)
{
    if (confirmed.size() > budgets.size())
        throw Error(ErrorCode::insufficient_share, "more confirmed slots than budget entries");
    std::sort(confirmed.begin(), confirmed.end(), [](const SlotPrice& a, const SlotPrice& b) {
        return a.price != b.price ? a.price < b.price : a.slot_id < b.slot_id;
    });
    std::size_t offset = budgets.size() - confirmed.size();
    std::vector<std::size_t> entries;
    slot_order.clear();
    for (std::size_t i = 0; i < confirmed.size(); ++i) {
        std::size_t entry = offset + i;
        if (confirmed[i].price > budgets[entry])
            throw Error(ErrorCode::insufficient_share,
                        "slot " + std::to_string(confirmed[i].slot_id) + " exceeds its budget entry");
        entries.push_back(entry);
        slot_order.push_back(confirmed[i].slot_id);
    }
    return entries;
}

} // namespace teevil::enclave
