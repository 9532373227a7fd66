#include "harness/replay.hpp"

#include "common/error.hpp"
#include "harness/verify.hpp"
#include "harness/world.hpp"

#include <sstream>
#include <vector>

namespace teevil::harness {

namespace {

std::vector<std::string> lines_of(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        out.push_back(line);
    return out;
}

} // namespace

ScenarioConfig config_from_log(const std::string& file_text)
{
    auto lines = lines_of(file_text);
    if (lines.size() < 2 || lines[0] != "# teevil-eventlog v1" || lines[1].rfind("# config ", 0) != 0)
        throw Error(ErrorCode::schema_error, "not a teevil event log");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(lines[1].substr(9));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::schema_error, std::string("embedded config: ") + e.what());
    }
    return parse_scenario(j);
}

ReplayResult replay_log(const std::string& file_text)
{
    ScenarioConfig cfg = config_from_log(file_text);
    auto recorded = lines_of(strip_log_header(file_text));
    auto replayed = lines_of(run_scenario(cfg).event_log);
    ReplayResult r;
    r.recorded_lines = recorded.size();
    r.replayed_lines = replayed.size();
    std::size_t n = std::max(recorded.size(), replayed.size());
    for (std::size_t i = 0; i < n; ++i) {
        const std::string a = i < recorded.size() ? recorded[i] : "<end of log>";
        const std::string b = i < replayed.size() ? replayed[i] : "<end of log>";
        if (a != b) {
            r.first_divergence = i + 1;
            r.recorded_line = a;
            r.replayed_line = b;
            return r;
        }
    }
    r.identical = true;
    return r;
}

} // namespace teevil::harness
