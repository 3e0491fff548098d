#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <unordered_map>

#include "msim/lob/types.hpp"

namespace msim::lob {

// Price-then-FIFO matching book. Single-writer: only the exchange agent
// mutates it inside the kernel's event loop.
class OrderBook {
public:
    SubmitResult submit(const Order& order);

    // volume absent -> cancel the full remaining amount
    CancelResult cancel(OrderId id, std::optional<Volume> volume = std::nullopt);

    LOBSnapshot snapshot(int depth = 20) const;

    std::optional<SnapshotLevel> best_bid() const;
    std::optional<SnapshotLevel> best_ask() const;
    std::optional<MidPrice> mid() const;

    Volume remaining_volume(OrderId id) const;
    const std::vector<Trade>& trade_log() const { return trade_log_; }
    Volume cumulative_traded() const { return cumulative_traded_; }
    std::size_t open_order_count() const { return locator_.size(); }

private:
    struct QueueEntry {
        OrderId id;
        Volume remaining;
        std::uint64_t seq;
    };
    struct Level {
        std::deque<QueueEntry> queue;
        Volume total = 0;
    };

    template <typename BookSide>
    Volume match_against(BookSide& side, const Order& order, Volume remaining,
                         bool resting_is_buy);

    std::map<Ticks, Level, std::greater<Ticks>> bids_;
    std::map<Ticks, Level> asks_;
    std::unordered_map<OrderId, std::pair<Side, Ticks>> locator_;
    std::vector<Trade> trade_log_;
    Volume cumulative_traded_ = 0;
    std::uint64_t next_seq_ = 0;
};

} // namespace msim::lob
