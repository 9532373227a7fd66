#include "harness/verify.hpp"

#include "common/digest.hpp"
#include "harness/verdict.hpp"

#include <sstream>

namespace teevil::harness {

namespace {

bool final_status(const std::string& s)
{
    return s != "pending" && s != "performed";
}

/// Where in the log an evidence token must show up.
std::string log_needle(const std::string& token)
{
    if (token.rfind("killed=", 0) == 0)
        return " " + token.substr(7) + " killed";
    if (token.rfind("eclipse=", 0) == 0)
        return "eclipse owner=" + token.substr(8);
    if (token.rfind("msg=", 0) == 0)
        return token + " ";
    auto sp = token.find(' ');
    if (token.rfind("campaign=", 0) == 0 && sp != std::string::npos && token.find("slot=") == std::string::npos)
        return token.substr(0, sp);
    return token;
}

} // namespace

std::string strip_log_header(const std::string& file_text)
{
    std::istringstream in(file_text);
    std::string line, out;
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) == 0)
            continue;
        out += line;
        out += '\n';
    }
    return out;
}

std::vector<Violation> verify_report(const Report& r, const std::optional<std::string>& event_log)
{
    std::vector<Violation> v;
    auto fail = [&v](std::string check, std::string detail) { v.push_back({std::move(check), std::move(detail)}); };

    if (!r.p2p || !r.parties.empty()) {
        Amount sum = r.delta_sum();
        if (sum != -r.burned)
            fail("conservation", "party deltas sum to " + sum.to_string() + " but burned is " + r.burned.to_string());
    }

    for (const auto& c : r.campaigns) {
        Amount out = c.rewards_paid + c.fees_paid + c.deposit_returned + c.deposit_burned + c.refunded +
                     c.escrow_residual;
        if (c.funding_landed > Amount{} && out != c.funding_landed)
            fail("campaign-balance", c.id + ": funded " + c.funding_landed.to_string() + ", accounted " +
                                         out.to_string());
        if (c.deposit_returned + c.deposit_burned > c.deposit_required)
            fail("deposit", c.id + ": returned plus burned exceeds the deposit");
        Amount slot_deposits, slot_rewards, slot_fees;
        for (const auto& s : c.slots) {
            if (s.settlement_landed) {
                slot_deposits += s.deposit_share;
                slot_rewards += s.reward;
                slot_fees += s.fee;
                if (!(s.reward > Amount{}) || !(s.fee > Amount{}) || !(s.deposit_share > Amount{}))
                    fail("atomicity", c.id + " slot " + std::to_string(s.slot_id) + ": partial settlement");
                if (s.status != "confirmed")
                    fail("atomicity", c.id + " slot " + std::to_string(s.slot_id) + ": paid while " + s.status);
            }
            if (c.outcome == "terminated" && !final_status(s.status))
                fail("final-status", c.id + " slot " + std::to_string(s.slot_id) + " ended " + s.status);
        }
        if (slot_deposits != c.deposit_returned || slot_rewards != c.rewards_paid || slot_fees != c.fees_paid)
            fail("atomicity", c.id + ": settlement outputs outside per-slot transactions");
        if (c.outcome == "terminated" && c.escrow_residual == Amount{} && c.funding_landed > Amount{}) {
            // Every deposit unit comes back, burns, or rides home in a refund.
            Amount refunded_deposit = c.deposit_required - c.deposit_returned - c.deposit_burned;
            if (refunded_deposit > c.refunded)
                fail("deposit", c.id + ": " + refunded_deposit.to_string() + " of deposit unaccounted");
        }
    }

    Verdict again = compute_verdict(r);
    Report probe = r;
    probe.verdict = again;
    if (to_json(probe)["verdict"] != to_json(r)["verdict"])
        fail("verdict", "stored verdict differs from recomputation");

    if (event_log) {
        if (sha256(*event_log).hex() != r.event_log_digest)
            fail("log-digest", "event log does not match the report digest");
        for (const auto& p : r.verdict.parties)
            for (const auto& token : p.evidence)
                if (event_log->find(log_needle(token)) == std::string::npos)
                    fail("evidence", p.party + ": '" + token + "' not in the event log");
    }
    return v;
}

} // namespace teevil::harness
