#include "harness/verdict.hpp"

#include <algorithm>
#include <set>

namespace teevil::harness {

namespace {

int rank(const std::string& c)
{
    if (c == "harmed")
        return 3;
    if (c == "fair(self-harm)")
        return 2;
    if (c == "advantaged")
        return 1;
    return 0;
}

struct Cause {
    std::string adversary;
    std::string token;
};

std::string slot_token(const CampaignReport& c, std::int64_t slot)
{
    return "campaign=" + c.id + " slot=" + std::to_string(slot);
}

class Judge {
public:
    explicit Judge(const Report& r) : r_(r)
    {
        for (const auto& p : r.parties)
            if (p.role != "escrow")
                verdict_.parties.push_back(PartyVerdict{p.party, p.role, "fair", {}});
    }

    void raise(const std::string& party, const std::string& cls, const std::string& evidence)
    {
        for (auto& p : verdict_.parties)
            if (p.party == party) {
                if (rank(cls) > rank(p.classification))
                    p.classification = cls;
                if (std::find(p.evidence.begin(), p.evidence.end(), evidence) == p.evidence.end())
                    p.evidence.push_back(evidence);
            }
    }

    /// Adversarial events touching a campaign (optionally one slot): drops,
    /// kills of its enclaves, eclipses, and the renter's own forged view.
    std::vector<Cause> causes(const CampaignReport& c, std::int64_t slot = -1) const
    {
        std::vector<Cause> out;
        for (const auto& d : r_.drops)
            if (d.campaign == c.id && (slot < 0 || d.slot == slot || d.slot < 0))
                out.push_back({d.adversary, "msg=" + std::to_string(d.msg_id)});
        for (const auto& k : r_.kills) {
            bool ours = k.actor == c.interface ||
                        std::find(c.payment_enclaves.begin(), c.payment_enclaves.end(), k.actor) !=
                            c.payment_enclaves.end();
            if (!ours && slot >= 0)
                for (const auto& s : c.slots)
                    if (s.slot_id == slot && s.share_enclave == k.actor)
                        ours = true;
            if (ours)
                out.push_back({k.adversary, "killed=" + k.actor});
        }
        for (const auto& e : r_.eclipses)
            if (e.campaign == c.id)
                out.push_back({e.adversary, "eclipse=" + e.owner});
        if (c.forged_view)
            out.push_back({c.renter, "campaign=" + c.id + " forged"});
        return out;
    }

    /// The host running the enclaves is the maintainer for attribution.
    static bool same(const std::string& party, const std::string& role, const std::string& adversary)
    {
        return adversary == party || (role == "maintainer" && adversary == "host");
    }

    /// Harmed unless every cause is the party itself.
    void harm(const std::string& party, const std::string& role, const std::vector<Cause>& causes,
              const std::string& token)
    {
        bool foreign = causes.empty();
        for (const auto& c : causes)
            if (!same(party, role, c.adversary))
                foreign = true;
        std::string cls = foreign ? "harmed" : "fair(self-harm)";
        raise(party, cls, token);
        for (const auto& c : causes)
            raise(party, cls, c.token);
    }

    bool reverted(const std::string& owner) const
    {
        return std::any_of(r_.reverts.begin(), r_.reverts.end(),
                           [&](const RevertReport& x) { return x.owner == owner; });
    }

    void judge(const CampaignReport& c)
    {
        for (const auto& s : c.slots) {
            if (s.owner.empty())
                continue;
            bool paid = s.settlement_landed && (s.reward > Amount{});
            std::string tok = slot_token(c, s.slot_id);
            if (paid && !s.effect_present) {
                raise(s.owner, "advantaged", tok);
                harm(c.renter, "renter", {{s.owner, tok}}, tok);
            }
            if (!paid && s.applied && !s.ghost) {
                auto cs = causes(c, s.slot_id);
                if (reverted(s.owner) && !s.effect_present) {
                    raise(s.owner, "fair(self-harm)", tok);
                } else {
                    if (cs.empty())
                        cs.push_back({"", tok});
                    harm(s.owner, "owner", cs, tok);
                    if (s.effect_present)
                        raise(c.renter, "advantaged", tok);
                }
            }
            // Funding that never reached the honest chain carried no real
            // fee or deposit, so nothing of the maintainer's or renter's was lost.
            bool real = c.funding_landed > Amount{};
            if (real && s.status == "confirmed" && (s.fee > Amount{}) && !s.settlement_landed) {
                auto cs = causes(c, s.slot_id);
                harm("maintainer", "maintainer", cs, s.settlement_tx.empty() ? tok : "tx=" + s.settlement_tx);
            }
            // An unsettled deposit share is only lost while it sits in escrow;
            // a recovery or termination refund gives it back.
            if (real && s.status == "confirmed" && !s.settlement_landed && (s.deposit_share > Amount{}) &&
                (c.escrow_residual > Amount{})) {
                auto cs = causes(c, s.slot_id);
                harm(c.renter, "renter", cs, s.settlement_tx.empty() ? tok : "tx=" + s.settlement_tx);
            }
        }
        if ((c.deposit_burned > Amount{})) {
            std::vector<Cause> cs;
            for (const auto& s : c.slots)
                if (s.status == "timeout")
                    for (auto& x : causes(c, s.slot_id))
                        cs.push_back(x);
            if (cs.empty())
                cs = causes(c);
            harm(c.renter, "renter", cs, "campaign=" + c.id + " burned");
        }
        if ((c.escrow_residual > Amount{}))
            harm(c.renter, "renter", causes(c), "campaign=" + c.id + " stranded");
        // A forged view that bought nothing only wasted the renter's effort.
        if (c.forged_view)
            for (const auto& p : verdict_.parties)
                if (p.party == c.renter && p.classification == "fair")
                    raise(c.renter, "fair(self-harm)", "campaign=" + c.id + " forged");
    }

    Verdict finish()
    {
        for (const auto& c : r_.campaigns)
            judge(c);
        return std::move(verdict_);
    }

private:
    const Report& r_;
    Verdict verdict_;
};

} // namespace

Verdict compute_verdict(const Report& report) { return Judge(report).finish(); }

} // namespace teevil::harness
