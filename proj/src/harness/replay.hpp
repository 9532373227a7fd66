#pragma once

#include "harness/scenario.hpp"

#include <optional>
#include <string>

namespace teevil::harness {

struct ReplayResult {
    bool identical = false;
    std::size_t recorded_lines = 0;
    std::size_t replayed_lines = 0;
    /// 1-based line of the first difference, if any.
    std::optional<std::size_t> first_divergence;
    std::string recorded_line;
    std::string replayed_line;
};

/// Reads the config embedded in an event-log file. Throws Error{schema_error}
/// if the header is missing or malformed.
ScenarioConfig config_from_log(const std::string& file_text);

/// Re-runs the embedded config and diffs the fresh log line by line.
ReplayResult replay_log(const std::string& file_text);

} // namespace teevil::harness
