#pragma once

#include "harness/report.hpp"

#include <optional>
#include <string>
#include <vector>

namespace teevil::harness {

struct Violation {
    std::string check;
    std::string detail;
};

/// Invariants every finished run must satisfy, checked from the report
/// (and the event log when given): coin conservation, per-campaign balance,
/// atomic settlements, deposit accounting, final slot states, the verdict
/// matching a recomputation, and every evidence token appearing in the log.
std::vector<Violation> verify_report(const Report& report, const std::optional<std::string>& event_log = {});

/// Strips the event-log file header, returning the bare log.
std::string strip_log_header(const std::string& file_text);

} // namespace teevil::harness
