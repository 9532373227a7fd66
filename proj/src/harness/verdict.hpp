#pragma once

#include "harness/report.hpp"

namespace teevil::harness {

/// Classifies every non-escrow party from the report alone, so a saved
/// report can be re-judged by `verify`. Precedence when several rules fire:
/// harmed, then fair(self-harm), then advantaged, then fair.
Verdict compute_verdict(const Report& report);

} // namespace teevil::harness
