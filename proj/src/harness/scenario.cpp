#include "harness/scenario.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace teevil::harness {

using nlohmann::json;

namespace {

std::string join(const std::vector<SchemaViolation>& v)
{
    std::string out;
    for (const auto& x : v) {
        if (!out.empty())
            out += "; ";
        out += x.field + ": " + x.cause;
    }
    return out;
}

/// Walks a JSON object, recording violations under dotted paths instead of
/// stopping at the first one.
class Reader {
public:
    std::vector<SchemaViolation> violations;

    void fail(const std::string& path, const std::string& cause) { violations.push_back({path, cause}); }

    bool object(const json& j, const std::string& path, std::initializer_list<const char*> allowed)
    {
        if (!j.is_object()) {
            fail(path, "expected an object");
            return false;
        }
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& [k, _] : j.items())
            if (!ok.contains(k))
                fail(join_path(path, k), "unknown field");
        return true;
    }

    static std::string join_path(const std::string& path, const std::string& key)
    {
        return path.empty() ? key : path + "." + key;
    }

    double number(const json& j, const std::string& path, const char* key, double fallback, double lo, double hi)
    {
        if (!j.contains(key))
            return fallback;
        const json& v = j.at(key);
        std::string p = join_path(path, key);
        if (!v.is_number()) {
            fail(p, "expected a number");
            return fallback;
        }
        double x = v.get<double>();
        if (x < lo || x > hi) {
            std::ostringstream os;
            os << "must be in [" << lo << ", " << hi << "], got " << x;
            fail(p, os.str());
            return fallback;
        }
        return x;
    }

    std::uint64_t count(const json& j, const std::string& path, const char* key, std::uint64_t fallback,
                        std::uint64_t lo, std::uint64_t hi)
    {
        if (!j.contains(key))
            return fallback;
        const json& v = j.at(key);
        std::string p = join_path(path, key);
        if (!v.is_number_integer() || (v.is_number_integer() && v.get<std::int64_t>() < 0)) {
            fail(p, "expected a non-negative integer");
            return fallback;
        }
        auto x = v.get<std::uint64_t>();
        if (x < lo || x > hi) {
            fail(p, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + std::to_string(x));
            return fallback;
        }
        return x;
    }

    bool boolean(const json& j, const std::string& path, const char* key, bool fallback)
    {
        if (!j.contains(key))
            return fallback;
        if (!j.at(key).is_boolean()) {
            fail(join_path(path, key), "expected true or false");
            return fallback;
        }
        return j.at(key).get<bool>();
    }

    std::string string(const json& j, const std::string& path, const char* key, const std::string& fallback,
                       bool required = false)
    {
        if (!j.contains(key)) {
            if (required)
                fail(join_path(path, key), "required");
            return fallback;
        }
        if (!j.at(key).is_string()) {
            fail(join_path(path, key), "expected a string");
            return fallback;
        }
        std::string s = j.at(key).get<std::string>();
        if (required && s.empty())
            fail(join_path(path, key), "must not be empty");
        for (char ch : s)
            if (std::isspace(static_cast<unsigned char>(ch))) {
                fail(join_path(path, key), "must not contain whitespace");
                break;
            }
        return s;
    }

    std::vector<std::string> strings(const json& j, const std::string& path, const char* key)
    {
        std::vector<std::string> out;
        if (!j.contains(key))
            return out;
        const json& v = j.at(key);
        if (!v.is_array()) {
            fail(join_path(path, key), "expected an array of strings");
            return out;
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_string())
                fail(join_path(path, key) + "[" + std::to_string(i) + "]", "expected a string");
            else
                out.push_back(v[i].get<std::string>());
        }
        return out;
    }

    Amount amount(const json& j, const std::string& path, const char* key, Amount fallback, bool required = false)
    {
        if (!j.contains(key)) {
            if (required)
                fail(join_path(path, key), "required");
            return fallback;
        }
        const json& v = j.at(key);
        std::string p = join_path(path, key);
        try {
            Amount a = v.is_string() ? Amount::parse(v.get<std::string>())
                       : v.is_number() ? Amount::parse(v.dump())
                                       : throw std::invalid_argument("expected a coin amount");
            if (a < Amount{}) {
                fail(p, "must not be negative");
                return fallback;
            }
            return a;
        } catch (const std::exception& e) {
            fail(p, std::string("invalid amount: ") + e.what());
            return fallback;
        }
    }

    template <typename F>
    void array(const json& j, const std::string& path, const char* key, F&& each)
    {
        if (!j.contains(key))
            return;
        const json& v = j.at(key);
        if (!v.is_array()) {
            fail(join_path(path, key), "expected an array");
            return;
        }
        for (std::size_t i = 0; i < v.size(); ++i)
            each(v[i], join_path(path, key) + "[" + std::to_string(i) + "]");
    }
};

constexpr double kMaxSeconds = 1e7;

void read_latency(Reader& r, const json& j, const std::string& path, enclave::LatencyModel& m)
{
    if (!r.object(j, path, {"requests", "snark", "link_s"}))
        return;
    auto dist = [&](const json& d, const std::string& p, enclave::LatencyDist& out) {
        if (!r.object(d, p, {"mean_s", "sd_s"}))
            return;
        out.mean_s = r.number(d, p, "mean_s", out.mean_s, 0, 3600);
        out.sd_s = r.number(d, p, "sd_s", out.sd_s, 0, 3600);
    };
    if (j.contains("requests")) {
        const json& reqs = j.at("requests");
        if (!reqs.is_array() || reqs.size() != m.requests.size())
            r.fail(path + ".requests", "expected exactly 5 request distributions");
        else
            for (std::size_t i = 0; i < reqs.size(); ++i)
                dist(reqs[i], path + ".requests[" + std::to_string(i) + "]", m.requests[i]);
    }
    if (j.contains("snark"))
        dist(j.at("snark"), path + ".snark", m.snark);
    m.link = seconds(r.number(j, path, "link_s", to_seconds(m.link), 0, 3600));
}

std::optional<services::ServiceAction> read_action(Reader& r, const json& j, const std::string& path)
{
    if (!r.object(j, path, {"kind", "target", "link"}))
        return std::nullopt;
    services::ServiceAction a;
    std::string kind = r.string(j, path, "kind", "", true);
    auto k = services::action_kind_from_string(kind);
    if (!k) {
        if (!kind.empty())
            r.fail(path + ".kind", "unknown action kind '" + kind + "'");
        return std::nullopt;
    }
    a.kind = *k;
    a.target = r.string(j, path, "target", "");
    a.link = r.string(j, path, "link", "");
    return a;
}

void read_directive(Reader& r, const json& j, const std::string& p, Directive& d)
{
    if (!r.object(j, p,
                  {"kind", "at_s", "until_s", "adversary", "cut_point", "msg_kind", "owner", "campaign", "src", "dst",
                   "exchange", "extra_s", "target", "on"}))
        return;
    static const std::map<std::string, DirectiveKind> kinds{
        {"cut", DirectiveKind::cut},   {"drop", DirectiveKind::drop},       {"delay", DirectiveKind::delay},
        {"kill", DirectiveKind::kill}, {"revive", DirectiveKind::revive},   {"eclipse", DirectiveKind::eclipse},
        {"collusion", DirectiveKind::collusion}};
    std::string kind = r.string(j, p, "kind", "", true);
    if (auto it = kinds.find(kind); it != kinds.end())
        d.kind = it->second;
    else if (!kind.empty())
        r.fail(p + ".kind", "unknown directive '" + kind + "'");
    d.at_s = r.number(j, p, "at_s", 0, 0, kMaxSeconds);
    if (j.contains("until_s"))
        d.until_s = r.number(j, p, "until_s", kMaxSeconds, 0, kMaxSeconds);
    d.adversary = r.string(j, p, "adversary", "host");
    if (j.contains("cut_point")) {
        const json& c = j.at("cut_point");
        if (!c.is_number_integer() || c.get<std::int64_t>() < 1 || c.get<std::int64_t>() > 5)
            r.fail(p + ".cut_point", "unknown cut point " + c.dump() + " (expected 1-5)");
        else
            d.cut_point = c.get<int>();
    }
    if (j.contains("msg_kind")) {
        std::string mk = r.string(j, p, "msg_kind", "");
        d.msg_kind = simnet::msg_kind_from_string(mk);
        if (!d.msg_kind)
            r.fail(p + ".msg_kind", "unknown message kind '" + mk + "'");
    }
    auto opt = [&](const char* key, std::optional<std::string>& out) {
        if (j.contains(key))
            out = r.string(j, p, key, "");
    };
    opt("owner", d.owner);
    opt("campaign", d.campaign);
    opt("src", d.src);
    opt("dst", d.dst);
    if (j.contains("exchange"))
        d.exchange = static_cast<int>(r.count(j, p, "exchange", 1, 1, 5));
    d.extra_s = r.number(j, p, "extra_s", 0, 0, kMaxSeconds);
    d.target = r.string(j, p, "target", "");
    d.on = r.boolean(j, p, "on", true);

    switch (d.kind) {
    case DirectiveKind::cut:
        if (!d.cut_point && !j.contains("cut_point"))
            r.fail(p + ".cut_point", "required for cut");
        break;
    case DirectiveKind::drop:
    case DirectiveKind::delay:
        if (!d.msg_kind && !d.cut_point && !j.contains("msg_kind") && !j.contains("cut_point"))
            r.fail(p, "needs msg_kind or cut_point");
        if (d.kind == DirectiveKind::delay && d.extra_s <= 0)
            r.fail(p + ".extra_s", "delay needs a positive extra_s");
        break;
    case DirectiveKind::kill:
    case DirectiveKind::revive:
    case DirectiveKind::collusion:
        if (d.target.empty())
            r.fail(p + ".target", "required");
        break;
    case DirectiveKind::eclipse:
        if (!d.owner)
            r.fail(p + ".owner", "required for eclipse");
        if (!d.campaign)
            r.fail(p + ".campaign", "required for eclipse");
        break;
    }
}

} // namespace

SchemaError::SchemaError(std::vector<SchemaViolation> violations)
    : Error(ErrorCode::schema_error, join(violations)), violations_(std::move(violations))
{
}

ScenarioConfig parse_scenario(const json& j)
{
    Reader r;
    ScenarioConfig c;
    if (!r.object(j, "",
                  {"name", "seed", "topology", "ledger", "economics", "timing", "latency", "services", "owner_groups",
                   "renters", "campaigns", "adversary", "stop_after_s", "start_timeout_s"}))
        throw SchemaError(r.violations);

    c.name = r.string(j, "", "name", c.name);
    c.seed = r.count(j, "", "seed", c.seed, 0, std::numeric_limits<std::uint64_t>::max());
    c.stop_after_s = r.number(j, "", "stop_after_s", c.stop_after_s, 1, kMaxSeconds);
    c.start_timeout_s = r.number(j, "", "start_timeout_s", c.start_timeout_s, 1, kMaxSeconds);

    enclave::Params& P = c.params;
    if (j.contains("topology") && r.object(j.at("topology"), "topology",
                                           {"mode", "interfaces", "service_enclaves", "payment_enclaves", "edges"})) {
        const json& t = j.at("topology");
        std::string mode = r.string(t, "topology", "mode", "centralized");
        if (auto m = gossip::mode_from_string(mode))
            c.topology.mode = *m;
        else
            r.fail("topology.mode", "unknown mode '" + mode + "'");
        c.topology.interfaces = r.count(t, "topology", "interfaces", 1, 1, 1000);
        c.topology.service_enclaves = r.count(t, "topology", "service_enclaves", 1, 0, 10000);
        c.topology.payment_enclaves = r.count(t, "topology", "payment_enclaves", 1, 0, 10000);
        r.array(t, "topology", "edges", [&](const json& e, const std::string& p) {
            if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
                r.fail(p, "expected [a, b] interface indices");
                return;
            }
            auto a = e[0].get<std::size_t>(), b = e[1].get<std::size_t>();
            if (a >= c.topology.interfaces || b >= c.topology.interfaces || a == b)
                r.fail(p, "edge endpoints must be distinct interface indices");
            else
                c.topology.edges.emplace_back(a, b);
        });
        if (c.topology.mode == gossip::Mode::centralized && c.topology.interfaces != 1)
            r.fail("topology.interfaces", "centralized mode has exactly one interface");
    }
    if (j.contains("ledger") && r.object(j.at("ledger"), "ledger",
                                         {"difficulty_bits", "confirmations", "view_headers", "block_interval_s"})) {
        const json& l = j.at("ledger");
        P.difficulty_bits = static_cast<unsigned>(r.count(l, "ledger", "difficulty_bits", P.difficulty_bits, 0, 20));
        P.confirmations = static_cast<unsigned>(r.count(l, "ledger", "confirmations", P.confirmations, 1, 100));
        P.view_headers = r.count(l, "ledger", "view_headers", P.view_headers, 1, 1000);
        P.block_interval = seconds(r.number(l, "ledger", "block_interval_s", to_seconds(P.block_interval), 1, 86400));
        if (P.view_headers < P.confirmations)
            r.fail("ledger.view_headers", "must be at least ledger.confirmations");
    }
    if (j.contains("economics") &&
        r.object(j.at("economics"), "economics", {"deposit_rate", "fee_rate", "maintainer_address"})) {
        const json& e = j.at("economics");
        P.deposit_rate = Rate::from_double(r.number(e, "economics", "deposit_rate", P.deposit_rate.as_double(), 0, 1));
        P.fee_rate = Rate::from_double(r.number(e, "economics", "fee_rate", P.fee_rate.as_double(), 0, 1));
        P.maintainer_address = r.string(e, "economics", "maintainer_address", P.maintainer_address);
    }
    if (j.contains("timing") &&
        r.object(j.at("timing"), "timing",
                 {"poll_interval_s", "poll_period_s", "liveness_window_s", "heartbeat_interval_s", "gate_timeout_s",
                  "response_timeout_s", "gossip_interval_s", "gossip_batch"})) {
        const json& t = j.at("timing");
        auto sec = [&](const char* key, Duration& d, double lo) {
            d = seconds(r.number(t, "timing", key, to_seconds(d), lo, kMaxSeconds));
        };
        sec("poll_interval_s", P.poll_interval, 1);
        P.poll_period = P.poll_interval / 2;
        sec("poll_period_s", P.poll_period, 1);
        sec("liveness_window_s", P.liveness_window, 0.001);
        sec("heartbeat_interval_s", P.heartbeat_interval, 0.001);
        sec("gate_timeout_s", P.gate_timeout, 0.001);
        sec("response_timeout_s", P.response_timeout, 0);
        sec("gossip_interval_s", P.gossip_interval, 0.001);
        P.gossip_batch = r.count(t, "timing", "gossip_batch", P.gossip_batch, 1, 1'000'000);
        if (P.poll_period > P.poll_interval)
            r.fail("timing.poll_period_s", "must not exceed timing.poll_interval_s");
        if (P.heartbeat_interval >= P.liveness_window)
            r.fail("timing.heartbeat_interval_s", "must be shorter than timing.liveness_window_s");
    }
    if (j.contains("latency"))
        read_latency(r, j.at("latency"), "latency", P.latency);

    std::set<std::string> service_ids;
    r.array(j, "", "services", [&](const json& s, const std::string& p) {
        if (!r.object(s, p, {"id", "kind", "vote_policy", "candidates", "items", "colluding"}))
            return;
        ServiceConfig sc;
        sc.id = r.string(s, p, "id", "", true);
        std::string kind = r.string(s, p, "kind", "social");
        if (kind == "social")
            sc.kind = ServiceConfig::Kind::social;
        else if (kind == "voting")
            sc.kind = ServiceConfig::Kind::voting;
        else
            r.fail(p + ".kind", "unknown service kind '" + kind + "'");
        std::string pol = r.string(s, p, "vote_policy", "first_counts");
        if (auto vp = services::vote_policy_from_string(pol))
            sc.vote_policy = *vp;
        else
            r.fail(p + ".vote_policy", "unknown policy '" + pol + "'");
        sc.candidates = r.strings(s, p, "candidates");
        r.array(s, p, "items", [&](const json& it, const std::string& ip) {
            if (!r.object(it, ip, {"id", "hidden"}))
                return;
            sc.items.push_back(ItemConfig{r.string(it, ip, "id", "", true), r.boolean(it, ip, "hidden", false)});
        });
        sc.colluding = r.boolean(s, p, "colluding", false);
        if (!service_ids.insert(sc.id).second)
            r.fail(p + ".id", "duplicate service id '" + sc.id + "'");
        c.services.push_back(std::move(sc));
    });

    std::set<std::string> owner_prefixes;
    r.array(j, "", "owner_groups", [&](const json& g, const std::string& p) {
        if (!r.object(g, p,
                      {"prefix", "count", "price", "price_step", "services", "actions", "targets",
                       "accepts_revert_window", "home", "ghost", "profile", "cpu"}))
            return;
        OwnerGroup og;
        og.prefix = r.string(g, p, "prefix", "owner", true);
        og.count = r.count(g, p, "count", 1, 0, 100000);
        og.price = r.amount(g, p, "price", Amount{}, true);
        og.price_step = r.amount(g, p, "price_step", Amount{});
        og.services = r.strings(g, p, "services");
        for (const auto& s : og.services)
            if (!service_ids.contains(s))
                r.fail(p + ".services", "unknown service '" + s + "'");
        for (const auto& a : r.strings(g, p, "actions")) {
            if (auto k = services::action_kind_from_string(a))
                og.actions.push_back(*k);
            else
                r.fail(p + ".actions", "unknown action kind '" + a + "'");
        }
        og.targets = r.strings(g, p, "targets");
        og.accepts_revert_window = r.boolean(g, p, "accepts_revert_window", true);
        og.home = r.count(g, p, "home", 0, 0, 1000);
        if (og.home >= c.topology.interfaces)
            r.fail(p + ".home", "no interface with index " + std::to_string(og.home));
        og.ghost = r.boolean(g, p, "ghost", false);
        og.cpu = r.string(g, p, "cpu", "");
        if (g.contains("profile") &&
            r.object(g.at("profile"), p + ".profile",
                     {"drops_nonce", "cuts_responses", "reverts_actions", "revert_delay_s", "prevote"})) {
            const json& pr = g.at("profile");
            std::string pp = p + ".profile";
            og.profile.drops_nonce = r.boolean(pr, pp, "drops_nonce", false);
            og.profile.cuts_responses = r.boolean(pr, pp, "cuts_responses", false);
            og.profile.reverts_actions = r.boolean(pr, pp, "reverts_actions", false);
            og.profile.revert_delay_s = r.number(pr, pp, "revert_delay_s", 60, 0, kMaxSeconds);
            og.profile.prevote = r.string(pr, pp, "prevote", "");
        }
        if (!owner_prefixes.insert(og.prefix).second)
            r.fail(p + ".prefix", "duplicate owner prefix '" + og.prefix + "'");
        c.owner_groups.push_back(std::move(og));
    });

    std::set<std::string> renter_ids;
    r.array(j, "", "renters", [&](const json& rj, const std::string& p) {
        if (!r.object(rj, p, {"id", "balance"}))
            return;
        RenterConfig rc{r.string(rj, p, "id", "", true), r.amount(rj, p, "balance", Amount{}, true)};
        if (!renter_ids.insert(rc.id).second)
            r.fail(p + ".id", "duplicate renter id '" + rc.id + "'");
        c.renters.push_back(rc);
    });

    std::set<std::string> campaign_ids;
    r.array(j, "", "campaigns", [&](const json& cj, const std::string& p) {
        if (!r.object(cj, p,
                      {"id", "renter", "service", "action", "count", "revert_window_s", "start_at_s", "interface",
                       "forged_view", "hidden_target"}))
            return;
        CampaignConfig cc;
        cc.id = r.string(cj, p, "id", "", true);
        cc.renter = r.string(cj, p, "renter", "", true);
        cc.service = r.string(cj, p, "service", "", true);
        if (!cc.renter.empty() && !renter_ids.contains(cc.renter))
            r.fail(p + ".renter", "unknown renter '" + cc.renter + "'");
        if (!cc.service.empty() && !service_ids.contains(cc.service))
            r.fail(p + ".service", "unknown service '" + cc.service + "'");
        if (!cj.contains("action"))
            r.fail(p + ".action", "required");
        else if (auto a = read_action(r, cj.at("action"), p + ".action"))
            cc.action = *a;
        cc.count = r.count(cj, p, "count", 1, 1, 1'000'000);
        cc.revert_window_s = r.number(cj, p, "revert_window_s", 0, 0, kMaxSeconds);
        cc.start_at_s = r.number(cj, p, "start_at_s", 0, 0, kMaxSeconds);
        cc.interface = r.count(cj, p, "interface", 0, 0, 1000);
        if (cc.interface >= c.topology.interfaces)
            r.fail(p + ".interface", "no interface with index " + std::to_string(cc.interface));
        cc.forged_view = r.boolean(cj, p, "forged_view", false);
        cc.hidden_target = r.boolean(cj, p, "hidden_target", false);
        if (!campaign_ids.insert(cc.id).second)
            r.fail(p + ".id", "duplicate campaign id '" + cc.id + "'");
        c.campaigns.push_back(std::move(cc));
    });

    r.array(j, "", "adversary", [&](const json& dj, const std::string& p) {
        Directive d;
        read_directive(r, dj, p, d);
        if (d.campaign && !campaign_ids.contains(*d.campaign))
            r.fail(p + ".campaign", "unknown campaign '" + *d.campaign + "'");
        if (d.kind == DirectiveKind::collusion && !d.target.empty() && !service_ids.contains(d.target))
            r.fail(p + ".target", "unknown service '" + d.target + "'");
        if (d.until_s && *d.until_s < d.at_s)
            r.fail(p + ".until_s", "must not precede at_s");
        c.adversary.push_back(std::move(d));
    });

    if (!r.violations.empty())
        throw SchemaError(r.violations);
    return c;
}

ScenarioConfig load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::io_error, "cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError({{path, std::string("not valid JSON: ") + e.what()}});
    }
    return parse_scenario(j);
}

json to_json(const ScenarioConfig& c)
{
    const enclave::Params& P = c.params;
    json j;
    j["name"] = c.name;
    j["seed"] = c.seed;
    j["stop_after_s"] = c.stop_after_s;
    j["start_timeout_s"] = c.start_timeout_s;
    json edges = json::array();
    for (auto [a, b] : c.topology.edges)
        edges.push_back({a, b});
    j["topology"] = {{"mode", gossip::to_string(c.topology.mode)},
                     {"interfaces", c.topology.interfaces},
                     {"service_enclaves", c.topology.service_enclaves},
                     {"payment_enclaves", c.topology.payment_enclaves},
                     {"edges", edges}};
    j["ledger"] = {{"difficulty_bits", P.difficulty_bits},
                   {"confirmations", P.confirmations},
                   {"view_headers", P.view_headers},
                   {"block_interval_s", to_seconds(P.block_interval)}};
    j["economics"] = {{"deposit_rate", P.deposit_rate.as_double()},
                      {"fee_rate", P.fee_rate.as_double()},
                      {"maintainer_address", P.maintainer_address}};
    j["timing"] = {{"poll_interval_s", to_seconds(P.poll_interval)},
                   {"poll_period_s", to_seconds(P.poll_period)},
                   {"liveness_window_s", to_seconds(P.liveness_window)},
                   {"heartbeat_interval_s", to_seconds(P.heartbeat_interval)},
                   {"gate_timeout_s", to_seconds(P.gate_timeout)},
                   {"response_timeout_s", to_seconds(P.response_timeout)},
                   {"gossip_interval_s", to_seconds(P.gossip_interval)},
                   {"gossip_batch", P.gossip_batch}};
    json reqs = json::array();
    for (const auto& d : P.latency.requests)
        reqs.push_back({{"mean_s", d.mean_s}, {"sd_s", d.sd_s}});
    j["latency"] = {{"requests", reqs},
                    {"snark", {{"mean_s", P.latency.snark.mean_s}, {"sd_s", P.latency.snark.sd_s}}},
                    {"link_s", to_seconds(P.latency.link)}};
    j["services"] = json::array();
    for (const auto& s : c.services) {
        json items = json::array();
        for (const auto& it : s.items)
            items.push_back({{"id", it.id}, {"hidden", it.hidden}});
        j["services"].push_back({{"id", s.id},
                                 {"kind", s.kind == ServiceConfig::Kind::social ? "social" : "voting"},
                                 {"vote_policy", services::to_string(s.vote_policy)},
                                 {"candidates", s.candidates},
                                 {"items", items},
                                 {"colluding", s.colluding}});
    }
    j["owner_groups"] = json::array();
    for (const auto& g : c.owner_groups) {
        std::vector<std::string> actions;
        for (auto a : g.actions)
            actions.push_back(services::to_string(a));
        j["owner_groups"].push_back({{"prefix", g.prefix},
                                     {"count", g.count},
                                     {"price", g.price.to_string()},
                                     {"price_step", g.price_step.to_string()},
                                     {"services", g.services},
                                     {"actions", actions},
                                     {"targets", g.targets},
                                     {"accepts_revert_window", g.accepts_revert_window},
                                     {"home", g.home},
                                     {"ghost", g.ghost},
                                     {"cpu", g.cpu},
                                     {"profile",
                                      {{"drops_nonce", g.profile.drops_nonce},
                                       {"cuts_responses", g.profile.cuts_responses},
                                       {"reverts_actions", g.profile.reverts_actions},
                                       {"revert_delay_s", g.profile.revert_delay_s},
                                       {"prevote", g.profile.prevote}}}});
    }
    j["renters"] = json::array();
    for (const auto& r : c.renters)
        j["renters"].push_back({{"id", r.id}, {"balance", r.balance.to_string()}});
    j["campaigns"] = json::array();
    for (const auto& cc : c.campaigns)
        j["campaigns"].push_back(
            {{"id", cc.id},
             {"renter", cc.renter},
             {"service", cc.service},
             {"action",
              {{"kind", services::to_string(cc.action.kind)}, {"target", cc.action.target}, {"link", cc.action.link}}},
             {"count", cc.count},
             {"revert_window_s", cc.revert_window_s},
             {"start_at_s", cc.start_at_s},
             {"interface", cc.interface},
             {"forged_view", cc.forged_view},
             {"hidden_target", cc.hidden_target}});
    j["adversary"] = json::array();
    static const char* kind_names[] = {"cut", "drop", "delay", "kill", "revive", "eclipse", "collusion"};
    for (const auto& d : c.adversary) {
        json dj{{"kind", kind_names[static_cast<int>(d.kind)]},
                {"at_s", d.at_s},
                {"adversary", d.adversary},
                {"extra_s", d.extra_s},
                {"target", d.target},
                {"on", d.on}};
        if (d.until_s)
            dj["until_s"] = *d.until_s;
        if (d.cut_point)
            dj["cut_point"] = *d.cut_point;
        if (d.msg_kind)
            dj["msg_kind"] = simnet::to_string(*d.msg_kind);
        if (d.owner)
            dj["owner"] = *d.owner;
        if (d.campaign)
            dj["campaign"] = *d.campaign;
        if (d.src)
            dj["src"] = *d.src;
        if (d.dst)
            dj["dst"] = *d.dst;
        if (d.exchange)
            dj["exchange"] = *d.exchange;
        j["adversary"].push_back(std::move(dj));
    }
    return j;
}

} // namespace teevil::harness
