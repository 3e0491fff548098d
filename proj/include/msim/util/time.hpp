#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace msim {

// Simulation clocks are nanoseconds since midnight (wall-clock-of-day).
using NanoTime = std::int64_t;

inline constexpr NanoTime kNsPerSec = 1'000'000'000LL;
inline constexpr NanoTime kNsPerMin = 60 * kNsPerSec;

// "HH:MM" or "HH:MM:SS" -> ns since midnight
inline NanoTime parse_time_of_day(const std::string& s) {
    int h = 0, m = 0, sec = 0;
    const int n = std::sscanf(s.c_str(), "%d:%d:%d", &h, &m, &sec);
    if (n < 2 || h < 0 || h > 23 || m < 0 || m > 59 || sec < 0 || sec > 59)
        throw std::invalid_argument("bad time of day: " + s);
    return (static_cast<NanoTime>(h) * 3600 + m * 60 + sec) * kNsPerSec;
}

inline std::string format_time_of_day(NanoTime t) {
    const auto secs = t / kNsPerSec;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%02lld:%02lld:%02lld",
                  static_cast<long long>(secs / 3600),
                  static_cast<long long>((secs / 60) % 60),
                  static_cast<long long>(secs % 60));
    return buf;
}

} // namespace msim
