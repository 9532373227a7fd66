#include "parties/service_host.hpp"

#include "common/error.hpp"

namespace teevil::parties {

using simnet::Message;
using simnet::MsgKind;

void ServiceHost::handle(const Message& m)
{
    if (m.kind != MsgKind::service_request)
        return;
    const auto& req = std::any_cast<const enclave::msg::ServiceRequest&>(m.payload);
    enclave::msg::ServiceReply reply;
    reply.token = req.token;
    reply.exchange = req.exchange;
    reply.pipeline = req.pipeline;
    reply.reply_to = req.reply_to;
    std::size_t idx = static_cast<std::size_t>(std::clamp(req.exchange, 1, 5) - 1);
    reply.latency = rt_.params.latency.requests[idx].draw(rt_.net);
    try {
        if (req.exchange == 1)
            reply.pipeline = service_.open_pipeline(req.credential, req.action, req.source);
        else
            service_.exchange(req.pipeline, req.exchange, req.source);
    } catch (const Error& e) {
        reply.ok = false;
        reply.error = e.what();
        reply.rejected_credentials = e.code() == ErrorCode::auth_failed;
    }
    Message out;
    out.src = id();
    out.dst = m.src;
    out.kind = MsgKind::service_reply;
    out.channel = simnet::Channel::service_tls;
    out.carries_secret = true;
    out.meta = m.meta;
    out.payload = std::move(reply);
    rt_.net.send(std::move(out), reply.latency + rt_.params.latency.link);
}

} // namespace teevil::parties
