#include "parties/owner.hpp"

#include "common/error.hpp"

namespace teevil::parties {

using simnet::Channel;
using simnet::Message;
using simnet::MsgKind;
namespace msg = enclave::msg;

Owner::Owner(enclave::Runtime& rt, std::string owner_id, OwnerProfile profile, std::string payout_address)
    : rt_(rt), id_(std::move(owner_id)), profile_(profile), payout_(std::move(payout_address))
{
}

void Owner::add_account(services::Credential credential, enclave::Policy policy)
{
    accounts_.push_back(enclave::ServiceEnrollment{std::move(credential), std::move(policy)});
}

enclave::EnrollmentRequest Owner::enrollment() const
{
    return enclave::EnrollmentRequest{id_, accounts_, proxy_actor(), proxy_endpoint(), payout_};
}

bool Owner::echo_nonce(const Digest&) const { return !profile_.drops_nonce && rt_.net.alive(id_); }

std::vector<ledger::BlockHeader> Owner::chain_headers(std::uint64_t from) const
{
    if (const simnet::EclipseFeed* feed = rt_.net.eclipse_feed(id_))
        return feed->chain->headers(from);
    return rt_.ledger.chain().headers(from);
}

void Owner::start_polling(ReEnroll reenroll)
{
    reenroll_ = std::move(reenroll);
    if (polling_)
        return;
    polling_ = true;
    rt_.net.schedule(rt_.params.poll_period, id_, [this] { poll(); });
}

void Owner::poll()
{
    if (!home_.empty()) {
        std::uint64_t seq = ++poll_seq_;
        Message m;
        m.src = id_;
        m.dst = home_;
        m.kind = MsgKind::poll;
        m.channel = Channel::attested;
        m.payload = msg::Poll{id_, proxy_endpoint()};
        rt_.net.send(std::move(m), rt_.params.latency.link);
        rt_.net.schedule(rt_.params.gate_timeout, id_, [this, seq] {
            if (acked_seq_ < seq && reenroll_) {
                rt_.net.log(id_, "poll-miss", "home=" + home_);
                reenroll_(*this);
            }
        });
    }
    rt_.net.schedule(rt_.params.poll_period, id_, [this] { poll(); });
}

void Owner::handle(const Message& m)
{
    switch (m.kind) {
    case MsgKind::chain_query: {
        const auto& q = std::any_cast<const msg::ChainQuery&>(m.payload);
        Message out;
        out.src = id_;
        out.dst = m.src;
        out.kind = MsgKind::owner_latest_block;
        out.channel = Channel::attested;
        out.meta = m.meta;
        out.payload = msg::LatestBlock{chain_headers(q.from_height), q.request_id};
        rt_.net.send(std::move(out), rt_.params.latency.link);
        break;
    }
    case MsgKind::service_request: {
        msg::ServiceRequest req = std::any_cast<const msg::ServiceRequest&>(m.payload);
        req.source = proxy_endpoint();
        Message out;
        out.src = id_;
        out.dst = req.credential.service_id;
        out.kind = MsgKind::service_request;
        out.channel = Channel::service_tls;
        out.carries_secret = true;
        out.meta = m.meta;
        out.payload = std::move(req);
        rt_.net.send(std::move(out), rt_.params.latency.link);
        break;
    }
    case MsgKind::service_reply: {
        const auto& reply = std::any_cast<const msg::ServiceReply&>(m.payload);
        Message out;
        out.src = id_;
        out.dst = reply.reply_to;
        out.kind = MsgKind::service_response;
        out.channel = Channel::service_tls;
        out.carries_secret = true;
        out.meta = m.meta;
        out.payload = reply;
        rt_.net.send(std::move(out), rt_.params.latency.link);
        if (profile_.reverts_actions && reply.ok && reply.exchange == services::MockService::pipeline_length) {
            std::string service_id = m.src;
            rt_.net.schedule(profile_.revert_delay, id_, [this, service_id] {
                services::MockService* svc = rt_.service(service_id);
                if (!svc)
                    return;
                for (const auto& e : accounts_) {
                    if (e.credential.service_id != service_id || svc->history(e.credential.account).empty())
                        continue;
                    services::ServiceAction last = svc->history(e.credential.account).back();
                    try {
                        svc->revert(e.credential.account, last);
                        ++reverts_;
                        rt_.net.log(id_, "revert", "service=" + service_id + " target=" + last.target);
                    } catch (const Error&) {
                    }
                }
            });
        }
        break;
    }
    case MsgKind::settlement_to_owner: {
        const auto& copy = std::any_cast<const msg::TxCopy&>(m.payload);
        received_.push_back(copy.tx);
        try {
            rt_.ledger.submit_tx(copy.tx);
        } catch (const Error&) {
        }
        break;
    }
    case MsgKind::poll: {
        acked_seq_ = poll_seq_;
        break;
    }
    default: break;
    }
}

} // namespace teevil::parties
