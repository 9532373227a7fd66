#include "services/service.hpp"

#include "common/error.hpp"

namespace teevil::services {

namespace {
constexpr std::pair<ActionKind, const char*> kind_names[] = {
    {ActionKind::upvote, "upvote"},
    {ActionKind::post, "post"},
    {ActionKind::follow, "follow"},
    {ActionKind::vote, "vote"},
};
} // namespace

std::string to_string(ActionKind kind)
{
    for (const auto& [k, name] : kind_names)
        if (k == kind)
            return name;
    return "?";
}

std::optional<ActionKind> action_kind_from_string(const std::string& text)
{
    for (const auto& [k, name] : kind_names)
        if (text == name)
            return k;
    return std::nullopt;
}

bool is_observable(ActionKind kind) { return kind != ActionKind::vote; }

void MockService::add_account(const std::string& account, const std::string& secret)
{
    accounts_[account] = secret;
}

void MockService::add_ghost(const std::string& account, const std::string& secret)
{
    accounts_[account] = secret;
    ghosts_.insert(account);
}

bool MockService::knows_account(const std::string& account) const { return accounts_.contains(account); }

bool MockService::test_login(const Credential& cred) const
{
    if (cred.service_id != id_)
        return false;
    auto it = accounts_.find(cred.account);
    if (it == accounts_.end() || it->second != cred.secret)
        return false;
    return !is_ghost(cred.account) || colluding_;
}

std::uint64_t MockService::open_pipeline(const Credential& cred, const ServiceAction& action,
                                         const std::string& source)
{
    if (!test_login(cred))
        throw Error(ErrorCode::auth_failed, id_ + "/" + cred.account);
    std::uint64_t id = next_pipeline_++;
    pipelines_.emplace(id, Pipeline{cred.account, action, 2});
    log_.push_back(RequestRecord{id, 1, cred.account, source});
    return id;
}

std::optional<Confirmation> MockService::exchange(std::uint64_t pipeline, int index, const std::string& source)
{
    auto it = pipelines_.find(pipeline);
    if (it == pipelines_.end() || it->second.next_exchange != index)
        throw Error(ErrorCode::action_rejected, "out-of-order exchange " + std::to_string(index));
    log_.push_back(RequestRecord{pipeline, index, it->second.account, source});
    if (index < pipeline_length) {
        ++it->second.next_exchange;
        return std::nullopt;
    }
    Pipeline p = std::move(it->second);
    pipelines_.erase(it);
    if (!accepts(p.action.kind))
        throw Error(ErrorCode::action_rejected, to_string(p.action.kind) + " on " + id_);
    if (is_ghost(p.account))
        return Confirmation{p.account, p.action, next_receipt_++};
    Confirmation c = apply(p.account, p.action);
    history_[p.account].push_back(p.action);
    return c;
}

const std::vector<ServiceAction>& MockService::history(const std::string& account) const
{
    static const std::vector<ServiceAction> none;
    auto it = history_.find(account);
    return it == history_.end() ? none : it->second;
}

Confirmation MockService::execute_pipeline(const Credential& cred, const ServiceAction& action,
                                           const std::string& source)
{
    std::uint64_t id = open_pipeline(cred, action, source);
    std::optional<Confirmation> conf;
    for (int i = 2; i <= pipeline_length; ++i)
        conf = exchange(id, i, source);
    return *conf;
}

} // namespace teevil::services
