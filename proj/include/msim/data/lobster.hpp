#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "msim/lob/types.hpp"
#include "msim/util/time.hpp"

namespace msim::data {

// LOBSTER message codes.
enum MsgType : int {
    kNewOrder = 1,
    kPartialCancel = 2,
    kDelete = 3,
    kExecuteVisible = 4,
    kExecuteHidden = 5,
    kCross = 6,
    kHalt = 7,
};

struct LobsterMessage {
    NanoTime time = 0; // ns after midnight (file stores decimal seconds)
    int type = 0;
    std::uint64_t order_id = 0;
    std::int64_t size = 0;
    std::int64_t price = 0; // 1e-4 currency units == ticks
    int direction = 0;      // -1 sell, +1 buy

    double time_seconds() const { return static_cast<double>(time) / 1e9; }
};

// One book row: ask/size/bid/size interleaved per level, best level first.
// Absent levels hold the LOBSTER sentinels and size 0.
struct LobsterBookRow {
    static constexpr std::int64_t kAskSentinel = 9999999999LL;
    static constexpr std::int64_t kBidSentinel = -9999999999LL;

    std::vector<std::array<std::int64_t, 4>> levels; // {ask_px, ask_sz, bid_px, bid_sz}

    std::optional<lob::SnapshotLevel> best_ask() const {
        if (levels.empty() || levels[0][0] >= kAskSentinel) return std::nullopt;
        return lob::SnapshotLevel{levels[0][0], levels[0][1]};
    }
    std::optional<lob::SnapshotLevel> best_bid() const {
        if (levels.empty() || levels[0][2] <= kBidSentinel) return std::nullopt;
        return lob::SnapshotLevel{levels[0][2], levels[0][3]};
    }
    std::optional<lob::MidPrice> mid() const {
        const auto bid = best_bid();
        const auto ask = best_ask();
        if (!bid || !ask) return std::nullopt;
        return lob::MidPrice{bid->price + ask->price};
    }
};

struct LobsterEvent {
    LobsterMessage msg;
    LobsterBookRow book;
};

struct ParseIssue {
    std::size_t line = 0; // 1-based
    std::string file;
    std::string reason;
};

struct LobsterData {
    std::vector<LobsterEvent> events;
    std::vector<ParseIssue> issues;
};

// Paired, time-ordered parse of a message/orderbook file pair. Row-count
// mismatch aborts; malformed rows are reported with line numbers and skipped.
LobsterData parse_lobster(const std::string& message_path, const std::string& book_path);

void write_lobster(const std::vector<LobsterEvent>& events, const std::string& message_path,
                   const std::string& book_path, int depth = 20);

std::string format_lobster_time(NanoTime t);

} // namespace msim::data
