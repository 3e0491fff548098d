#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "msim/util/time.hpp"

namespace msim::lob {

// Prices are integer ticks end to end; the matcher never touches a float.
// With LOBSTER data 1 tick = 1e-4 currency units.
using Ticks = std::int64_t;
using Volume = std::int64_t;
using OrderId = std::uint64_t;

enum class Side : int { Sell = -1, Buy = 1 };

inline int sign(Side s) { return static_cast<int>(s); }
inline Side opposite(Side s) { return s == Side::Buy ? Side::Sell : Side::Buy; }
inline Side side_from_sign(int d) { return d < 0 ? Side::Sell : Side::Buy; }

struct Order {
    OrderId id = 0;
    Side side = Side::Buy;
    Ticks price = 0;   // > 0
    Volume volume = 0; // >= 1
    NanoTime timestamp = 0;
    // Market-order emulation: match whatever crosses, discard the residual.
    bool marketable_only = false;
};

struct Trade {
    OrderId buy_id = 0;
    OrderId sell_id = 0;
    Ticks price = 0; // the resting order's limit price
    Volume volume = 0;
    NanoTime timestamp = 0;
};

// Mid-price is exact: stored doubled so a half-tick midpoint stays integral.
struct MidPrice {
    Ticks half_ticks = 0; // 2 * mid, in ticks
    double ticks() const { return 0.5 * static_cast<double>(half_ticks); }
    friend bool operator==(const MidPrice&, const MidPrice&) = default;
};

struct SnapshotLevel {
    Ticks price = 0;
    Volume volume = 0;
    friend bool operator==(const SnapshotLevel&, const SnapshotLevel&) = default;
};

struct LOBSnapshot {
    int depth = 20;
    std::vector<SnapshotLevel> bids; // best first (descending price)
    std::vector<SnapshotLevel> asks; // best first (ascending price)
    NanoTime timestamp = 0;
    friend bool operator==(const LOBSnapshot&, const LOBSnapshot&) = default;
};

inline std::optional<MidPrice> mid_price(const LOBSnapshot& snap) {
    if (snap.bids.empty() || snap.asks.empty()) return std::nullopt;
    return MidPrice{snap.bids.front().price + snap.asks.front().price};
}

enum class RejectReason { None, DuplicateId, BadVolume, BadPrice, BadSide };

struct SubmitResult {
    RejectReason reject = RejectReason::None;
    std::vector<Trade> trades;
    Volume executed = 0;
    Volume rested = 0;    // residual now resting at the limit price
    Volume discarded = 0; // marketable-only residual thrown away
    bool accepted() const { return reject == RejectReason::None; }
};

struct CancelResult {
    bool found = false;
    Volume cancelled = 0;
};

} // namespace msim::lob
