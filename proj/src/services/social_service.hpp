#pragma once

#include "services/service.hpp"

namespace teevil::services {

/// Observable service: items with public upvote counters and comment lists,
/// and per-user follower sets.
class SocialService final : public MockService {
public:
    explicit SocialService(std::string id = "social") : MockService(std::move(id)) {}

    bool accepts(ActionKind kind) const override { return kind != ActionKind::vote; }

    /// Returns the direct link; hidden items are only reachable with it.
    std::string create_item(const std::string& item, bool hidden = false);
    /// Public upvote counter. Throws Error{not_found} for unknown items or a
    /// hidden item without its link.
    std::int64_t observe(const std::string& item, const std::string& link = "") const;
    std::size_t followers(const std::string& user) const;

    /// Honest applications and reverts per item, for counter conservation.
    std::int64_t applied_upvotes(const std::string& item) const;
    std::int64_t reverted_upvotes(const std::string& item) const;

    void revert(const std::string& account, const ServiceAction& action) override;
    bool effect_present(const std::string& account, const ServiceAction& action) const override;
    bool publicly_visible(const std::string& account, const ServiceAction& action) const override;
    std::set<std::string> exposed_accounts(const std::string& target) const override;
    std::string dump() const override;

protected:
    Confirmation apply(const std::string& account, const ServiceAction& action) override;

private:
    struct Item {
        bool hidden = false;
        std::string link;
        std::set<std::string> upvoters;
        std::vector<std::string> posts;
        std::int64_t applied = 0;
        std::int64_t reverted = 0;
        /// Everyone who completed a pipeline against the item, ghosts included.
        std::set<std::string> touched_by;
    };

    const Item& visible_item(const std::string& item, const std::string& link) const;
    Item& item_for(const ServiceAction& action);

    std::map<std::string, Item> items_;
    std::map<std::string, std::set<std::string>> follows_;
    std::map<std::string, std::set<std::string>> follow_touched_;
};

} // namespace teevil::services
