#include "services/voting_service.hpp"

#include "common/error.hpp"

#include <algorithm>
#include <sstream>

namespace teevil::services {

std::string to_string(VotePolicy policy)
{
    return policy == VotePolicy::first_counts ? "first_counts" : "last_counts";
}

std::optional<VotePolicy> vote_policy_from_string(const std::string& text)
{
    if (text == "first_counts")
        return VotePolicy::first_counts;
    if (text == "last_counts")
        return VotePolicy::last_counts;
    return std::nullopt;
}

VotingService::VotingService(std::string id, VotePolicy policy, std::vector<std::string> candidates)
    : MockService(std::move(id)), policy_(policy), candidates_(std::move(candidates))
{
}

Confirmation VotingService::record(const std::string& account, const std::string& candidate)
{
    if (std::find(candidates_.begin(), candidates_.end(), candidate) == candidates_.end())
        throw Error(ErrorCode::not_found, "candidate " + candidate);
    auto it = counted_.find(account);
    if (it != counted_.end() && policy_ == VotePolicy::first_counts)
        throw Error(ErrorCode::already_voted, account);
    counted_[account] = candidate;
    return Confirmation{account, ServiceAction{ActionKind::vote, candidate, ""}, next_receipt_++};
}

Confirmation VotingService::cast_vote(const Credential& cred, const std::string& candidate)
{
    if (!test_login(cred))
        throw Error(ErrorCode::auth_failed, id() + "/" + cred.account);
    if (is_ghost(cred.account))
        return Confirmation{cred.account, ServiceAction{ActionKind::vote, candidate, ""}, next_receipt_++};
    return record(cred.account, candidate);
}

Confirmation VotingService::apply(const std::string& account, const ServiceAction& action)
{
    return record(account, action.target);
}

std::map<std::string, std::int64_t> VotingService::tallies() const
{
    std::map<std::string, std::int64_t> out;
    for (const auto& c : candidates_)
        out[c] = 0;
    for (const auto& [account, candidate] : counted_)
        ++out[candidate];
    return out;
}

bool VotingService::verify_ballot(const std::string& account, const std::string& candidate) const
{
    if (is_ghost(account))
        return colluding();
    auto it = counted_.find(account);
    return it != counted_.end() && it->second == candidate;
}

void VotingService::revert(const std::string& account, const ServiceAction& action)
{
    auto it = counted_.find(account);
    if (policy_ != VotePolicy::last_counts || it == counted_.end() || it->second != action.target)
        throw Error(ErrorCode::nothing_to_revert, account);
    for (const auto& c : candidates_)
        if (c != action.target) {
            it->second = c;
            return;
        }
    counted_.erase(it);
}

bool VotingService::effect_present(const std::string& account, const ServiceAction& action) const
{
    auto it = counted_.find(account);
    return !is_ghost(account) && it != counted_.end() && it->second == action.target;
}

bool VotingService::publicly_visible(const std::string&, const ServiceAction&) const
{
    throw Error(ErrorCode::not_observable, id());
}

std::set<std::string> VotingService::exposed_accounts(const std::string&) const { return {}; }

std::string VotingService::dump() const
{
    std::ostringstream out;
    out << "service " << id() << " voting policy=" << to_string(policy_) << "\n";
    for (const auto& [candidate, n] : tallies())
        out << "tally " << candidate << " " << n << "\n";
    return out.str();
}

} // namespace teevil::services
