#pragma once
// Random adversaries layered on top of a scenario: message drops, delays,
// kills and revives at random virtual times.

#include "harness/scenario.hpp"
#include "simnet/simnet.hpp"

#include <random>
#include <string>
#include <vector>

namespace fuzz {

inline std::vector<std::string> actors_of(const teevil::harness::ScenarioConfig& c)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < c.topology.interfaces; ++i) {
        out.push_back("iface-" + std::to_string(i));
        for (std::size_t e = 0; e < c.topology.service_enclaves; ++e)
            out.push_back("svc-" + std::to_string(i) + "-" + std::to_string(e));
        for (std::size_t p = 0; p < c.topology.payment_enclaves; ++p)
            out.push_back("pay-" + std::to_string(i) + "-" + std::to_string(p));
    }
    for (const auto& g : c.owner_groups)
        for (std::size_t i = 0; i < g.count; ++i)
            out.push_back(g.prefix + "-" + std::to_string(i));
    for (const auto& r : c.renters)
        out.push_back(r.id);
    return out;
}

/// Adds 1-4 random directives and reseeds the run.
inline teevil::harness::ScenarioConfig perturb(teevil::harness::ScenarioConfig c, std::uint64_t seed)
{
    using namespace teevil::harness;
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    auto when = [&] { return static_cast<double>(rng() % 1200); };
    auto actors = actors_of(c);
    c.seed = seed;
    std::size_t n = 1 + pick(4);
    for (std::size_t i = 0; i < n; ++i) {
        Directive d;
        d.adversary = pick(4) == 0 ? actors[pick(actors.size())] : "host";
        d.at_s = when();
        switch (pick(4)) {
        case 0:
        case 1:
            d.kind = pick(2) ? DirectiveKind::drop : DirectiveKind::delay;
            if (pick(2))
                d.cut_point = 1 + static_cast<int>(pick(5));
            else
                d.msg_kind = static_cast<teevil::simnet::MsgKind>(
                    pick(static_cast<std::size_t>(teevil::simnet::MsgKind::recovery_handoff) + 1));
            if (pick(2))
                d.until_s = d.at_s + 1 + static_cast<double>(rng() % 600);
            d.extra_s = 1 + static_cast<double>(rng() % 60);
            break;
        case 2:
            d.kind = DirectiveKind::kill;
            d.target = actors[pick(actors.size())];
            break;
        default: {
            std::string target = actors[pick(actors.size())];
            Directive kill;
            kill.kind = DirectiveKind::kill;
            kill.target = target;
            kill.at_s = d.at_s;
            kill.adversary = d.adversary;
            c.adversary.push_back(kill);
            d.kind = DirectiveKind::revive;
            d.target = target;
            d.at_s += 1 + static_cast<double>(rng() % 300);
            break;
        }
        }
        c.adversary.push_back(d);
    }
    return c;
}

} // namespace fuzz
