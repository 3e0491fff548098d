#include "msim/lob/order_book.hpp"

namespace msim::lob {

template <typename BookSide>
Volume OrderBook::match_against(BookSide& side, const Order& order, Volume remaining,
                                bool resting_is_buy) {
    while (remaining > 0 && !side.empty()) {
        auto it = side.begin();
        const Ticks level_price = it->first;
        if (!order.marketable_only) {
            const bool crosses = resting_is_buy ? level_price >= order.price
                                                : level_price <= order.price;
            if (!crosses) break;
        }
        Level& level = it->second;
        while (remaining > 0 && !level.queue.empty()) {
            QueueEntry& front = level.queue.front();
            const Volume fill = std::min(remaining, front.remaining);
            Trade t;
            t.price = level_price;
            t.volume = fill;
            t.timestamp = order.timestamp;
            t.buy_id = resting_is_buy ? front.id : order.id;
            t.sell_id = resting_is_buy ? order.id : front.id;
            trade_log_.push_back(t);
            cumulative_traded_ += fill;
            remaining -= fill;
            front.remaining -= fill;
            level.total -= fill;
            if (front.remaining == 0) {
                locator_.erase(front.id);
                level.queue.pop_front();
            }
        }
        if (level.queue.empty()) side.erase(it);
    }
    return remaining;
}

SubmitResult OrderBook::submit(const Order& order) {
    SubmitResult result;
    if (order.volume < 1) {
        result.reject = RejectReason::BadVolume;
        return result;
    }
    if (!order.marketable_only && order.price < 1) {
        result.reject = RejectReason::BadPrice;
        return result;
    }
    if (locator_.count(order.id)) {
        result.reject = RejectReason::DuplicateId;
        return result;
    }

    const std::size_t first_trade = trade_log_.size();
    Volume remaining = order.volume;
    if (order.side == Side::Buy) {
        remaining = match_against(asks_, order, remaining, /*resting_is_buy=*/false);
    } else {
        remaining = match_against(bids_, order, remaining, /*resting_is_buy=*/true);
    }
    result.trades.assign(trade_log_.begin() + first_trade, trade_log_.end());
    result.executed = order.volume - remaining;

    if (remaining > 0) {
        if (order.marketable_only) {
            result.discarded = remaining;
        } else {
            Level& level = order.side == Side::Buy ? bids_[order.price] : asks_[order.price];
            level.queue.push_back(QueueEntry{order.id, remaining, next_seq_++});
            level.total += remaining;
            locator_.emplace(order.id, std::make_pair(order.side, order.price));
            result.rested = remaining;
        }
    }
    return result;
}

CancelResult OrderBook::cancel(OrderId id, std::optional<Volume> volume) {
    auto loc = locator_.find(id);
    if (loc == locator_.end()) return {};

    const auto [side, price] = loc->second;
    auto cancel_in = [&](auto& book_side) -> Volume {
        auto level_it = book_side.find(price);
        Level& level = level_it->second;
        for (auto entry = level.queue.begin(); entry != level.queue.end(); ++entry) {
            if (entry->id != id) continue;
            const Volume amount = volume ? std::min(*volume, entry->remaining) : entry->remaining;
            entry->remaining -= amount;
            level.total -= amount;
            if (entry->remaining == 0) {
                level.queue.erase(entry);
                locator_.erase(loc);
                if (level.queue.empty()) book_side.erase(level_it);
            }
            return amount;
        }
        return 0;
    };

    const Volume cancelled = side == Side::Buy ? cancel_in(bids_) : cancel_in(asks_);
    return CancelResult{true, cancelled};
}

LOBSnapshot OrderBook::snapshot(int depth) const {
    LOBSnapshot snap;
    snap.depth = depth;
    for (const auto& [price, level] : bids_) {
        if (static_cast<int>(snap.bids.size()) >= depth) break;
        snap.bids.push_back({price, level.total});
    }
    for (const auto& [price, level] : asks_) {
        if (static_cast<int>(snap.asks.size()) >= depth) break;
        snap.asks.push_back({price, level.total});
    }
    return snap;
}

std::optional<SnapshotLevel> OrderBook::best_bid() const {
    if (bids_.empty()) return std::nullopt;
    const auto& [price, level] = *bids_.begin();
    return SnapshotLevel{price, level.total};
}

std::optional<SnapshotLevel> OrderBook::best_ask() const {
    if (asks_.empty()) return std::nullopt;
    const auto& [price, level] = *asks_.begin();
    return SnapshotLevel{price, level.total};
}

std::optional<MidPrice> OrderBook::mid() const {
    if (bids_.empty() || asks_.empty()) return std::nullopt;
    return MidPrice{bids_.begin()->first + asks_.begin()->first};
}

Volume OrderBook::remaining_volume(OrderId id) const {
    auto loc = locator_.find(id);
    if (loc == locator_.end()) return 0;
    const auto [side, price] = loc->second;
    auto scan = [&](const auto& book_side) -> Volume {
        auto level_it = book_side.find(price);
        for (const auto& entry : level_it->second.queue)
            if (entry.id == id) return entry.remaining;
        return 0;
    };
    return side == Side::Buy ? scan(bids_) : scan(asks_);
}

} // namespace msim::lob
