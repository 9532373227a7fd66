#pragma once

#include "enclave/messages.hpp"
#include "enclave/runtime.hpp"
#include "services/service.hpp"

namespace teevil::parties {

/// The network face of a mock service. Each exchange takes a drawn latency
/// before its reply leaves; the action itself lands on receipt of the last
/// exchange.
class ServiceHost {
public:
    ServiceHost(enclave::Runtime& rt, services::MockService& service) : rt_(rt), service_(service) {}

    const std::string& id() const { return service_.id(); }
    void handle(const simnet::Message& m);

private:
    enclave::Runtime& rt_;
    services::MockService& service_;
};

} // namespace teevil::parties
