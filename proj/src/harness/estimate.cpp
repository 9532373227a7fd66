#include "harness/estimate.hpp"

#include "common/error.hpp"

namespace teevil::harness {

Estimate estimate_campaign(const enclave::Params& params, std::size_t count, std::size_t service_enclaves,
                           std::size_t payment_enclaves)
{
    if (service_enclaves == 0 || payment_enclaves == 0)
        throw Error(ErrorCode::schema_error, "enclave counts must be positive");
    Estimate e;
    e.rounds_service = (count + service_enclaves - 1) / service_enclaves;
    e.rounds_payment = (count + payment_enclaves - 1) / payment_enclaves;
    e.service_s = static_cast<double>(e.rounds_service) * params.latency.mean_action_s();
    e.payment_s = static_cast<double>(e.rounds_payment) * params.latency.snark.mean_s;
    return e;
}

} // namespace teevil::harness
