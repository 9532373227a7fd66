#pragma once

#include "services/service.hpp"

namespace teevil::services {

enum class VotePolicy { first_counts, last_counts };

std::string to_string(VotePolicy policy);
std::optional<VotePolicy> vote_policy_from_string(const std::string& text);

/// Unobservable service: the public surface is the tally only.
class VotingService final : public MockService {
public:
    VotingService(std::string id, VotePolicy policy, std::vector<std::string> candidates);

    bool accepts(ActionKind kind) const override { return kind == ActionKind::vote; }
    VotePolicy policy() const { return policy_; }
    const std::vector<std::string>& candidates() const { return candidates_; }

    /// A vote cast directly by the credential holder, outside any pipeline.
    Confirmation cast_vote(const Credential& cred, const std::string& candidate);
    std::map<std::string, std::int64_t> tallies() const;
    /// Individual-verifiability hook: does the counted ballot of `account`
    /// name `candidate`? A colluding service vouches for its ghosts.
    bool verify_ballot(const std::string& account, const std::string& candidate) const;

    /// Casts a ballot for some other candidate. Effective only under
    /// last_counts; throws Error{nothing_to_revert} otherwise.
    void revert(const std::string& account, const ServiceAction& action) override;
    bool effect_present(const std::string& account, const ServiceAction& action) const override;
    bool publicly_visible(const std::string& account, const ServiceAction& action) const override;
    std::set<std::string> exposed_accounts(const std::string& target) const override;
    std::string dump() const override;

protected:
    Confirmation apply(const std::string& account, const ServiceAction& action) override;

private:
    Confirmation record(const std::string& account, const std::string& candidate);

    VotePolicy policy_;
    std::vector<std::string> candidates_;
    std::map<std::string, std::string> counted_;
};

} // namespace teevil::services
