#pragma once

#include "enclave/runtime.hpp"

#include <cstddef>

namespace teevil::harness {

/// Expected phase durations with every latency at its mean and no network
/// delay. Each service enclave runs its slots back to back; each payment
/// enclave proves its settlements back to back.
struct Estimate {
    std::size_t rounds_service = 0;
    std::size_t rounds_payment = 0;
    double service_s = 0;
    double payment_s = 0;
    double total_s() const { return service_s + payment_s; }
};

/// Throws Error{schema_error} when either enclave count is zero.
Estimate estimate_campaign(const enclave::Params& params, std::size_t count, std::size_t service_enclaves,
                           std::size_t payment_enclaves);

} // namespace teevil::harness
