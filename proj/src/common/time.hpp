#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <string>

namespace teevil {

/// Virtual time since simulation start, microsecond resolution.
using Duration = std::chrono::microseconds;
using SimTime = std::chrono::microseconds;

inline Duration seconds(double s) { return Duration(std::llround(s * 1e6)); }
inline double to_seconds(Duration d) { return static_cast<double>(d.count()) / 1e6; }

} // namespace teevil
