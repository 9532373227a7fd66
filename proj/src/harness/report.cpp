#include "harness/report.hpp"

#include "common/error.hpp"

#include <iomanip>
#include <sstream>

namespace teevil::harness {

using nlohmann::json;

const PartyVerdict* Verdict::find(const std::string& party) const
{
    for (const auto& p : parties)
        if (p.party == party)
            return &p;
    return nullptr;
}

const CampaignReport* Report::campaign(const std::string& id) const
{
    for (const auto& c : campaigns)
        if (c.id == id)
            return &c;
    return nullptr;
}

Amount Report::delta_sum() const
{
    Amount sum;
    for (const auto& p : parties)
        sum += p.delta();
    return sum;
}

namespace {

std::string amt(Amount a) { return a.to_string(); }
Amount amt(const json& j) { return Amount::parse(j.get<std::string>()); }

json slot_json(const SlotReport& s)
{
    json skipped = json::array();
    for (const auto& [o, st] : s.skipped)
        skipped.push_back({o, st});
    return {{"slot", s.slot_id},
            {"owner", s.owner},
            {"price", amt(s.price)},
            {"status", s.status},
            {"skipped", skipped},
            {"failure", s.failure},
            {"unverifiable", s.unverifiable},
            {"ghost", s.ghost},
            {"applied", s.applied},
            {"effect_present", s.effect_present},
            {"share_enclave", s.share_enclave},
            {"settlement_tx", s.settlement_tx},
            {"settlement_landed", s.settlement_landed},
            {"reward", amt(s.reward)},
            {"deposit_share", amt(s.deposit_share)},
            {"fee", amt(s.fee)}};
}

SlotReport slot_from(const json& j)
{
    SlotReport s;
    s.slot_id = j.at("slot").get<std::int64_t>();
    s.owner = j.at("owner").get<std::string>();
    s.price = amt(j.at("price"));
    s.status = j.at("status").get<std::string>();
    for (const auto& p : j.at("skipped"))
        s.skipped.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
    s.failure = j.at("failure").get<std::string>();
    s.unverifiable = j.at("unverifiable").get<bool>();
    s.ghost = j.at("ghost").get<bool>();
    s.applied = j.at("applied").get<bool>();
    s.effect_present = j.at("effect_present").get<bool>();
    s.share_enclave = j.at("share_enclave").get<std::string>();
    s.settlement_tx = j.at("settlement_tx").get<std::string>();
    s.settlement_landed = j.at("settlement_landed").get<bool>();
    s.reward = amt(j.at("reward"));
    s.deposit_share = amt(j.at("deposit_share"));
    s.fee = amt(j.at("fee"));
    return s;
}

json campaign_json(const CampaignReport& c)
{
    json slots = json::array();
    for (const auto& s : c.slots)
        slots.push_back(slot_json(s));
    return {{"id", c.id},
            {"renter", c.renter},
            {"interface", c.interface},
            {"service", c.service},
            {"outcome", c.outcome},
            {"reason", c.reason},
            {"forged_view", c.forged_view},
            {"count", c.count},
            {"funds_upper_bound", amt(c.funds_upper_bound)},
            {"deposit_required", amt(c.deposit_required)},
            {"funding_landed", amt(c.funding_landed)},
            {"deposit_returned", amt(c.deposit_returned)},
            {"deposit_burned", amt(c.deposit_burned)},
            {"refunded", amt(c.refunded)},
            {"rewards_paid", amt(c.rewards_paid)},
            {"fees_paid", amt(c.fees_paid)},
            {"escrow_residual", amt(c.escrow_residual)},
            {"phases",
             {{"service_s", c.phases.service_s},
              {"payment_s", c.phases.payment_s},
              {"termination_s", c.phases.termination_s}}},
            {"flags", c.flags},
            {"slots", slots},
            {"exposed_owners", c.exposed_owners},
            {"payment_enclaves", c.payment_enclaves}};
}

CampaignReport campaign_from(const json& j)
{
    CampaignReport c;
    c.id = j.at("id").get<std::string>();
    c.renter = j.at("renter").get<std::string>();
    c.interface = j.at("interface").get<std::string>();
    c.service = j.at("service").get<std::string>();
    c.outcome = j.at("outcome").get<std::string>();
    c.reason = j.at("reason").get<std::string>();
    c.forged_view = j.at("forged_view").get<bool>();
    c.count = j.at("count").get<std::size_t>();
    c.funds_upper_bound = amt(j.at("funds_upper_bound"));
    c.deposit_required = amt(j.at("deposit_required"));
    c.funding_landed = amt(j.at("funding_landed"));
    c.deposit_returned = amt(j.at("deposit_returned"));
    c.deposit_burned = amt(j.at("deposit_burned"));
    c.refunded = amt(j.at("refunded"));
    c.rewards_paid = amt(j.at("rewards_paid"));
    c.fees_paid = amt(j.at("fees_paid"));
    c.escrow_residual = amt(j.at("escrow_residual"));
    const json& ph = j.at("phases");
    c.phases = {ph.at("service_s").get<double>(), ph.at("payment_s").get<double>(),
                ph.at("termination_s").get<double>()};
    c.flags = j.at("flags").get<std::vector<std::string>>();
    for (const auto& s : j.at("slots"))
        c.slots.push_back(slot_from(s));
    c.exposed_owners = j.at("exposed_owners").get<std::vector<std::string>>();
    c.payment_enclaves = j.at("payment_enclaves").get<std::vector<std::string>>();
    return c;
}

} // namespace

json to_json(const Report& r)
{
    json j;
    j["scenario"] = r.scenario;
    j["seed"] = r.seed;
    j["mode"] = r.mode;
    j["end_time_s"] = r.end_time_s;
    j["chain_height"] = r.chain_height;
    j["parties"] = json::array();
    for (const auto& p : r.parties)
        j["parties"].push_back({{"party", p.party},
                                {"role", p.role},
                                {"address", p.address},
                                {"start", amt(p.start)},
                                {"end", amt(p.end)},
                                {"delta", amt(p.delta())}});
    j["burned"] = amt(r.burned);
    j["fees_collected"] = amt(r.fees_collected);
    j["campaigns"] = json::array();
    for (const auto& c : r.campaigns)
        j["campaigns"].push_back(campaign_json(c));
    j["exposure"] = r.exposure;
    j["drops"] = json::array();
    for (const auto& d : r.drops) {
        json dj{{"msg", d.msg_id}, {"adversary", d.adversary}, {"kind", d.kind},
                {"campaign", d.campaign}, {"slot", d.slot}, {"owner", d.owner}};
        dj["cut_point"] = d.cut_point ? json(*d.cut_point) : json(nullptr);
        j["drops"].push_back(std::move(dj));
    }
    j["kills"] = json::array();
    for (const auto& k : r.kills)
        j["kills"].push_back({{"actor", k.actor}, {"adversary", k.adversary}, {"at_s", k.at_s}});
    j["eclipses"] = json::array();
    for (const auto& e : r.eclipses)
        j["eclipses"].push_back({{"owner", e.owner}, {"adversary", e.adversary}, {"campaign", e.campaign}});
    j["reverts"] = json::array();
    for (const auto& v : r.reverts)
        j["reverts"].push_back({{"owner", v.owner}, {"count", v.count}});
    j["enrollment_failures"] = r.enrollment_failures;
    if (r.p2p) {
        json cs = json::array();
        for (const auto& c : r.p2p->campaigns)
            cs.push_back({{"id", c.id},
                          {"fulfilled", c.fulfilled},
                          {"refunded_slots", c.refunded_slots},
                          {"reached", c.reached},
                          {"flood_messages", c.flood_messages}});
        j["p2p"] = {{"registrations", r.p2p->registrations},
                    {"accepted", r.p2p->accepted},
                    {"rejected", r.p2p->rejected},
                    {"campaigns", cs}};
    } else {
        j["p2p"] = nullptr;
    }
    j["event_count"] = r.event_count;
    j["event_log_digest"] = r.event_log_digest;
    j["verdict"] = json::array();
    for (const auto& v : r.verdict.parties)
        j["verdict"].push_back(
            {{"party", v.party}, {"role", v.role}, {"classification", v.classification}, {"evidence", v.evidence}});
    return j;
}

Report report_from_json(const json& j)
{
    try {
        Report r;
        r.scenario = j.at("scenario").get<std::string>();
        r.seed = j.at("seed").get<std::uint64_t>();
        r.mode = j.at("mode").get<std::string>();
        r.end_time_s = j.at("end_time_s").get<double>();
        r.chain_height = j.at("chain_height").get<std::uint64_t>();
        for (const auto& p : j.at("parties"))
            r.parties.push_back(PartyAccount{p.at("party").get<std::string>(), p.at("role").get<std::string>(),
                                             p.at("address").get<std::string>(), amt(p.at("start")),
                                             amt(p.at("end"))});
        r.burned = amt(j.at("burned"));
        r.fees_collected = amt(j.at("fees_collected"));
        for (const auto& c : j.at("campaigns"))
            r.campaigns.push_back(campaign_from(c));
        r.exposure = j.at("exposure").get<std::map<std::string, std::vector<std::string>>>();
        for (const auto& d : j.at("drops")) {
            DropReport dr;
            dr.msg_id = d.at("msg").get<std::uint64_t>();
            dr.adversary = d.at("adversary").get<std::string>();
            dr.kind = d.at("kind").get<std::string>();
            if (!d.at("cut_point").is_null())
                dr.cut_point = d.at("cut_point").get<int>();
            dr.campaign = d.at("campaign").get<std::string>();
            dr.slot = d.at("slot").get<std::int64_t>();
            dr.owner = d.at("owner").get<std::string>();
            r.drops.push_back(std::move(dr));
        }
        for (const auto& k : j.at("kills"))
            r.kills.push_back(KillReport{k.at("actor").get<std::string>(), k.at("adversary").get<std::string>(),
                                         k.at("at_s").get<double>()});
        for (const auto& e : j.at("eclipses"))
            r.eclipses.push_back(EclipseReport{e.at("owner").get<std::string>(), e.at("adversary").get<std::string>(),
                                               e.at("campaign").get<std::string>()});
        for (const auto& v : j.at("reverts"))
            r.reverts.push_back(RevertReport{v.at("owner").get<std::string>(), v.at("count").get<std::size_t>()});
        r.enrollment_failures = j.at("enrollment_failures").get<std::vector<std::string>>();
        if (!j.at("p2p").is_null()) {
            const json& p = j.at("p2p");
            P2PReport pr;
            pr.registrations = p.at("registrations").get<std::size_t>();
            pr.accepted = p.at("accepted").get<std::size_t>();
            pr.rejected = p.at("rejected").get<std::size_t>();
            for (const auto& c : p.at("campaigns"))
                pr.campaigns.push_back({c.at("id").get<std::string>(), c.at("fulfilled").get<std::size_t>(),
                                        c.at("refunded_slots").get<std::size_t>(), c.at("reached").get<std::size_t>(),
                                        c.at("flood_messages").get<std::size_t>()});
            r.p2p = pr;
        }
        r.event_count = j.at("event_count").get<std::size_t>();
        r.event_log_digest = j.at("event_log_digest").get<std::string>();
        for (const auto& v : j.at("verdict"))
            r.verdict.parties.push_back(PartyVerdict{v.at("party").get<std::string>(), v.at("role").get<std::string>(),
                                                     v.at("classification").get<std::string>(),
                                                     v.at("evidence").get<std::vector<std::string>>()});
        return r;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::schema_error, std::string("malformed report: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw Error(ErrorCode::schema_error, std::string("malformed report: ") + e.what());
    }
}

std::string report_digest(const Report& r) { return sha256(to_json(r).dump()).hex(); }

std::string render_text(const Report& r)
{
    std::ostringstream os;
    os << "scenario " << r.scenario << " seed " << r.seed << " mode " << r.mode << "\n";
    os << "virtual end " << std::fixed << std::setprecision(3) << r.end_time_s << " s, chain height "
       << r.chain_height << ", " << r.event_count << " events\n";
    os << "event log digest " << r.event_log_digest << "\n\n";
    os << "parties\n";
    for (const auto& p : r.parties)
        os << "  " << std::left << std::setw(24) << p.party << std::setw(11) << p.role << std::right << std::setw(18)
           << p.delta().to_string() << "\n";
    os << "  burned " << r.burned.to_string() << ", fees collected " << r.fees_collected.to_string()
       << ", delta sum " << r.delta_sum().to_string() << "\n";
    for (const auto& c : r.campaigns) {
        os << "\ncampaign " << c.id << " (" << c.service << ", renter " << c.renter << ") " << c.outcome;
        if (!c.reason.empty())
            os << ": " << c.reason;
        os << "\n  funds " << c.funds_upper_bound.to_string() << ", deposit " << c.deposit_required.to_string()
           << " (returned " << c.deposit_returned.to_string() << ", burned " << c.deposit_burned.to_string()
           << "), refunded " << c.refunded.to_string() << ", rewards " << c.rewards_paid.to_string() << ", fees "
           << c.fees_paid.to_string() << "\n";
        if (c.escrow_residual > Amount{})
            os << "  stranded in escrow " << c.escrow_residual.to_string() << "\n";
        os << "  phases: service " << c.phases.service_s << " s, payment " << c.phases.payment_s
           << " s, termination " << c.phases.termination_s << " s\n";
        for (const auto& s : c.slots) {
            os << "  slot " << s.slot_id << " " << std::left << std::setw(16) << s.owner << std::setw(22) << s.status
               << std::right << (s.settlement_landed ? "paid" : "unpaid");
            if (!s.failure.empty())
                os << "  (" << s.failure << ")";
            for (const auto& [o, st] : s.skipped)
                os << " [skipped " << o << ": " << st << "]";
            os << "\n";
        }
        for (const auto& f : c.flags)
            os << "  flag: " << f << "\n";
        if (!c.exposed_owners.empty()) {
            os << "  exposed:";
            for (const auto& o : c.exposed_owners)
                os << " " << o;
            os << "\n";
        }
    }
    if (r.p2p) {
        os << "\np2p registrations " << r.p2p->registrations << ": accepted " << r.p2p->accepted << ", rejected "
           << r.p2p->rejected << "\n";
        for (const auto& c : r.p2p->campaigns)
            os << "  campaign " << c.id << ": fulfilled " << c.fulfilled << ", refunded " << c.refunded_slots
               << ", reached " << c.reached << " nodes\n";
    }
    if (!r.drops.empty())
        os << "\n" << r.drops.size() << " messages dropped\n";
    os << "\nverdict\n";
    for (const auto& v : r.verdict.parties) {
        os << "  " << std::left << std::setw(24) << v.party << v.classification;
        if (!v.evidence.empty()) {
            os << "  [";
            for (std::size_t i = 0; i < v.evidence.size() && i < 4; ++i)
                os << (i ? "; " : "") << v.evidence[i];
            if (v.evidence.size() > 4)
                os << "; +" << v.evidence.size() - 4 << " more";
            os << "]";
        }
        os << "\n";
    }
    return os.str();
}

} // namespace teevil::harness
