#include "services/social_service.hpp"

#include "common/error.hpp"

#include <sstream>

namespace teevil::services {

std::string SocialService::create_item(const std::string& item, bool hidden)
{
    Item& it = items_[item];
    it.hidden = hidden;
    it.link = "link-" + item;
    return it.link;
}

const SocialService::Item& SocialService::visible_item(const std::string& item, const std::string& link) const
{
    auto it = items_.find(item);
    if (it == items_.end() || (it->second.hidden && link != it->second.link))
        throw Error(ErrorCode::not_found, item);
    return it->second;
}

SocialService::Item& SocialService::item_for(const ServiceAction& action)
{
    auto it = items_.find(action.target);
    if (it == items_.end() || (it->second.hidden && action.link != it->second.link))
        throw Error(ErrorCode::not_found, action.target);
    return it->second;
}

std::int64_t SocialService::observe(const std::string& item, const std::string& link) const
{
    return static_cast<std::int64_t>(visible_item(item, link).upvoters.size());
}

std::size_t SocialService::followers(const std::string& user) const
{
    auto it = follows_.find(user);
    return it == follows_.end() ? 0 : it->second.size();
}

std::int64_t SocialService::applied_upvotes(const std::string& item) const
{
    auto it = items_.find(item);
    return it == items_.end() ? 0 : it->second.applied;
}

std::int64_t SocialService::reverted_upvotes(const std::string& item) const
{
    auto it = items_.find(item);
    return it == items_.end() ? 0 : it->second.reverted;
}

Confirmation SocialService::apply(const std::string& account, const ServiceAction& action)
{
    switch (action.kind) {
    case ActionKind::upvote: {
        Item& item = item_for(action);
        if (item.upvoters.contains(account))
            throw Error(ErrorCode::duplicate_action, account + " on " + action.target);
        item.upvoters.insert(account);
        item.touched_by.insert(account);
        ++item.applied;
        break;
    }
    case ActionKind::post: {
        Item& item = item_for(action);
        item.posts.push_back(account);
        item.touched_by.insert(account);
        break;
    }
    case ActionKind::follow: {
        auto& set = follows_[action.target];
        if (set.contains(account))
            throw Error(ErrorCode::duplicate_action, account + " follows " + action.target);
        set.insert(account);
        follow_touched_[action.target].insert(account);
        break;
    }
    case ActionKind::vote:
        throw Error(ErrorCode::action_rejected, "vote on " + id());
    }
    return Confirmation{account, action, next_receipt_++};
}

void SocialService::revert(const std::string& account, const ServiceAction& action)
{
    switch (action.kind) {
    case ActionKind::upvote: {
        auto it = items_.find(action.target);
        if (it == items_.end() || !it->second.upvoters.erase(account))
            throw Error(ErrorCode::nothing_to_revert, account + " on " + action.target);
        ++it->second.reverted;
        return;
    }
    case ActionKind::post: {
        auto it = items_.find(action.target);
        if (it != items_.end()) {
            auto& posts = it->second.posts;
            for (auto p = posts.begin(); p != posts.end(); ++p)
                if (*p == account) {
                    posts.erase(p);
                    return;
                }
        }
        throw Error(ErrorCode::nothing_to_revert, account + " on " + action.target);
    }
    case ActionKind::follow: {
        auto it = follows_.find(action.target);
        if (it == follows_.end() || !it->second.erase(account))
            throw Error(ErrorCode::nothing_to_revert, account + " follows " + action.target);
        return;
    }
    case ActionKind::vote: break;
    }
    throw Error(ErrorCode::nothing_to_revert, to_string(action.kind));
}

bool SocialService::effect_present(const std::string& account, const ServiceAction& action) const
{
    switch (action.kind) {
    case ActionKind::upvote: {
        auto it = items_.find(action.target);
        return it != items_.end() && it->second.upvoters.contains(account);
    }
    case ActionKind::post: {
        auto it = items_.find(action.target);
        if (it == items_.end())
            return false;
        for (const auto& p : it->second.posts)
            if (p == account)
                return true;
        return false;
    }
    case ActionKind::follow: {
        auto it = follows_.find(action.target);
        return it != follows_.end() && it->second.contains(account);
    }
    case ActionKind::vote: return false;
    }
    return false;
}

bool SocialService::publicly_visible(const std::string& account, const ServiceAction& action) const
{
    if (action.kind == ActionKind::follow)
        return effect_present(account, action);
    try {
        visible_item(action.target, action.link);
    } catch (const Error&) {
        return false;
    }
    return effect_present(account, action);
}

std::set<std::string> SocialService::exposed_accounts(const std::string& target) const
{
    if (auto it = items_.find(target); it != items_.end())
        return it->second.touched_by;
    if (auto it = follow_touched_.find(target); it != follow_touched_.end())
        return it->second;
    return {};
}

std::string SocialService::dump() const
{
    std::ostringstream out;
    out << "service " << id() << " social\n";
    for (const auto& [name, item] : items_) {
        out << "item " << name << " hidden=" << (item.hidden ? 1 : 0) << " upvotes=" << item.upvoters.size()
            << " posts=" << item.posts.size() << " applied=" << item.applied << " reverted=" << item.reverted
            << "\n";
    }
    for (const auto& [user, set] : follows_)
        out << "followers " << user << " " << set.size() << "\n";
    return out.str();
}

} // namespace teevil::services
