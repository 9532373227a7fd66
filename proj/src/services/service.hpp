#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace teevil::services {

enum class ActionKind { upvote, post, follow, vote };

std::string to_string(ActionKind kind);
std::optional<ActionKind> action_kind_from_string(const std::string& text);
/// Whether the action leaves a publicly visible trace. Fixed per kind.
bool is_observable(ActionKind kind);

struct ServiceAction {
    ActionKind kind = ActionKind::upvote;
    /// Item id, user name, or candidate, depending on the kind.
    std::string target;
    /// Direct link for hidden items; empty otherwise.
    std::string link;

    bool observable() const { return is_observable(kind); }
    friend bool operator==(const ServiceAction&, const ServiceAction&) = default;
};

struct Credential {
    std::string service_id;
    std::string account;
    std::string secret;
};

struct Confirmation {
    std::string account;
    ServiceAction action;
    std::uint64_t receipt = 0;
};

struct RequestRecord {
    std::uint64_t pipeline = 0;
    int exchange = 0;
    std::string account;
    /// Network endpoint the request arrived from.
    std::string source;
};

/// Shared account handling and the five-exchange request pipeline. The
/// action takes effect on the last exchange only.
class MockService {
public:
    static constexpr int pipeline_length = 5;

    explicit MockService(std::string id) : id_(std::move(id)) {}
    virtual ~MockService() = default;

    const std::string& id() const { return id_; }
    virtual bool accepts(ActionKind kind) const = 0;

    void add_account(const std::string& account, const std::string& secret);
    /// Accounts created by the service itself; their actions confirm but never
    /// change public state. Only answered while colluding.
    void add_ghost(const std::string& account, const std::string& secret);
    bool is_ghost(const std::string& account) const { return ghosts_.contains(account); }
    void set_collusion(bool on) { colluding_ = on; }
    bool colluding() const { return colluding_; }

    bool test_login(const Credential& cred) const;

    /// Exchange 1 (login). Throws Error{auth_failed}.
    std::uint64_t open_pipeline(const Credential& cred, const ServiceAction& action, const std::string& source);
    /// Exchanges 2..5. The last one applies the action and returns the
    /// confirmation. Throws Error{duplicate_action}, Error{already_voted},
    /// Error{not_found} or Error{action_rejected}.
    std::optional<Confirmation> exchange(std::uint64_t pipeline, int index, const std::string& source);
    /// All five exchanges back to back.
    Confirmation execute_pipeline(const Credential& cred, const ServiceAction& action, const std::string& source);

    const std::vector<RequestRecord>& request_log() const { return log_; }
    /// Actions applied through an account, as its holder sees them when
    /// logged in.
    const std::vector<ServiceAction>& history(const std::string& account) const;

    /// Undo an applied action. Throws Error{nothing_to_revert}.
    virtual void revert(const std::string& account, const ServiceAction& action) = 0;
    /// Ground truth: the action currently has its intended effect.
    virtual bool effect_present(const std::string& account, const ServiceAction& action) const = 0;
    /// What an independent, legitimate account can see. Throws
    /// Error{not_observable} for services without public effects.
    virtual bool publicly_visible(const std::string& account, const ServiceAction& action) const = 0;
    /// Accounts the service can tie to actions on `target`.
    virtual std::set<std::string> exposed_accounts(const std::string& target) const = 0;
    virtual std::string dump() const = 0;

protected:
    virtual Confirmation apply(const std::string& account, const ServiceAction& action) = 0;
    bool knows_account(const std::string& account) const;

    std::uint64_t next_receipt_ = 1;

private:
    struct Pipeline {
        std::string account;
        ServiceAction action;
        int next_exchange = 2;
    };

    std::string id_;
    std::map<std::string, std::string> accounts_;
    std::set<std::string> ghosts_;
    bool colluding_ = false;
    std::map<std::uint64_t, Pipeline> pipelines_;
    std::uint64_t next_pipeline_ = 1;
    std::vector<RequestRecord> log_;
    std::map<std::string, std::vector<ServiceAction>> history_;
};

} // namespace teevil::services
