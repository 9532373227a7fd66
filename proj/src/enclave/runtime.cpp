#include "enclave/runtime.hpp"

namespace teevil::enclave {

Duration LatencyDist::draw(simnet::Simnet& net) const
{
    double s = net.normal(mean_s, sd_s);
    return seconds(s < 0.0 ? 0.0 : s);
}

double LatencyModel::mean_action_s() const
{
    double total = 0.0;
    for (const auto& r : requests)
        total += r.mean_s;
    return total;
}

} // namespace teevil::enclave
