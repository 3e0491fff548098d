#include "msim/synth/flow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <unordered_map>

namespace msim::synth {

namespace {

struct Expiry {
    NanoTime time;
    lob::OrderId id;
    bool operator>(const Expiry& other) const {
        return time != other.time ? time > other.time : id > other.id;
    }
};

data::LobsterBookRow book_row(const lob::OrderBook& book, int depth) {
    const lob::LOBSnapshot snap = book.snapshot(depth);
    data::LobsterBookRow row;
    row.levels.resize(depth);
    for (int l = 0; l < depth; ++l) {
        auto& level = row.levels[l];
        if (l < static_cast<int>(snap.asks.size())) {
            level[0] = snap.asks[l].price;
            level[1] = snap.asks[l].volume;
        } else {
            level[0] = data::LobsterBookRow::kAskSentinel;
            level[1] = 0;
        }
        if (l < static_cast<int>(snap.bids.size())) {
            level[2] = snap.bids[l].price;
            level[3] = snap.bids[l].volume;
        } else {
            level[2] = data::LobsterBookRow::kBidSentinel;
            level[3] = 0;
        }
    }
    return row;
}

} // namespace

FlowStats generate_flow(const FlowParams& params, std::uint64_t seed, NanoTime session_start,
                        std::int64_t order_target, std::vector<data::LobsterEvent>& out,
                        int depth) {
    Rng rng(seed, 7001);
    lob::OrderBook book;
    FlowStats stats;

    std::priority_queue<Expiry, std::vector<Expiry>, std::greater<Expiry>> expiries;
    struct LiveInfo {
        lob::Side side;
        lob::Ticks price;
    };
    std::unordered_map<lob::OrderId, LiveInfo> info;
    std::vector<lob::OrderId> live;
    lob::OrderId next_id = 1;

    auto emit = [&](const data::LobsterMessage& msg) {
        out.push_back(data::LobsterEvent{msg, book_row(book, depth)});
    };

    auto place = [&](NanoTime t, lob::Side side, lob::Ticks price, lob::Volume volume,
                     NanoTime lifetime) {
        lob::Order order;
        order.id = next_id++;
        order.side = side;
        order.price = std::max<lob::Ticks>(price, 1);
        order.volume = volume;
        order.timestamp = t;
        const lob::SubmitResult result = book.submit(order);

        data::LobsterMessage msg;
        msg.time = t;
        msg.type = data::kNewOrder;
        msg.order_id = order.id;
        msg.size = order.volume;
        msg.price = order.price;
        msg.direction = lob::sign(side);
        emit(msg);
        ++stats.new_orders;

        for (const lob::Trade& trade : result.trades) {
            const lob::OrderId resting =
                side == lob::Side::Buy ? trade.sell_id : trade.buy_id;
            data::LobsterMessage exec;
            exec.time = t;
            exec.type = data::kExecuteVisible;
            exec.order_id = resting;
            exec.size = trade.volume;
            exec.price = trade.price;
            exec.direction = -lob::sign(side);
            emit(exec);
            ++stats.executions;
            stats.traded_volume += trade.volume;
        }
        if (result.rested > 0) {
            info[order.id] = LiveInfo{side, order.price};
            live.push_back(order.id);
            expiries.push(Expiry{t + lifetime, order.id});
        }
    };

    auto flush_expiries = [&](NanoTime upto) {
        while (!expiries.empty() && expiries.top().time <= upto) {
            const Expiry e = expiries.top();
            expiries.pop();
            const auto it = info.find(e.id);
            if (it == info.end()) continue; // already fully executed or cancelled
            const lob::CancelResult result = book.cancel(e.id);
            if (result.found && result.cancelled > 0) {
                data::LobsterMessage msg;
                msg.time = e.time;
                msg.type = data::kDelete;
                msg.order_id = e.id;
                msg.size = result.cancelled;
                msg.price = it->second.price;
                msg.direction = lob::sign(it->second.side);
                emit(msg);
                ++stats.deletes;
            }
            info.erase(it);
        }
    };

    // opening book: symmetric passive depth around the initial price, with
    // staggered lifetimes so it does not vanish all at once
    for (int k = 1; k <= params.seed_levels; ++k) {
        const NanoTime lifetime = params.order_lifetime + k * 15 * kNsPerSec;
        place(session_start, lob::Side::Buy, params.initial_price - k, params.seed_volume,
              lifetime);
        place(session_start, lob::Side::Sell, params.initial_price + k, params.seed_volume,
              lifetime);
    }

    std::deque<std::pair<NanoTime, double>> mid_history;
    double last_mid = static_cast<double>(params.initial_price);
    NanoTime t = session_start;

    while (stats.new_orders < order_target + 2 * params.seed_levels) {
        if (const auto mid = book.mid()) last_mid = mid->ticks();
        mid_history.emplace_back(t, last_mid);

        const double rate =
            params.base_rate_hz *
            std::clamp(static_cast<double>(params.initial_price) / last_mid, 0.5, 2.0);
        const NanoTime gap =
            std::max<NanoTime>(1, static_cast<NanoTime>(rng.exponential(rate) * 1e9));
        t += gap;
        flush_expiries(t);

        // occasional partial cancel of a random resting order
        if (!live.empty() && rng.bernoulli(params.partial_cancel_prob)) {
            for (int attempt = 0; attempt < 5 && !live.empty(); ++attempt) {
                const std::size_t pick = static_cast<std::size_t>(
                    rng.uniform_int(0, static_cast<std::int64_t>(live.size()) - 1));
                const lob::OrderId oid = live[pick];
                const lob::Volume remaining = book.remaining_volume(oid);
                if (remaining < 2) {
                    live[pick] = live.back();
                    live.pop_back();
                    continue;
                }
                const lob::Volume cut = remaining / 2;
                book.cancel(oid, cut);
                data::LobsterMessage msg;
                msg.time = t;
                msg.type = data::kPartialCancel;
                msg.order_id = oid;
                msg.size = cut;
                msg.price = info[oid].price;
                msg.direction = lob::sign(info[oid].side);
                emit(msg);
                ++stats.partial_cancels;
                break;
            }
        }

        // recent return sign drives a momentum-style direction choice
        while (mid_history.size() > 1 && mid_history[1].first <= t - params.return_lookback)
            mid_history.pop_front();
        const double past_mid = mid_history.front().second;
        const int return_sign = last_mid > past_mid ? 1 : (last_mid < past_mid ? -1 : 0);
        const double p_buy = 0.5 + params.direction_beta * return_sign;
        const lob::Side side = rng.bernoulli(p_buy) ? lob::Side::Buy : lob::Side::Sell;

        const int offset = rng.geometric(params.offset_geom_p) - params.offset_shift;
        const lob::Ticks base = side == lob::Side::Buy
                                    ? static_cast<lob::Ticks>(std::floor(last_mid))
                                    : static_cast<lob::Ticks>(std::ceil(last_mid));
        const lob::Ticks price = side == lob::Side::Buy ? base - offset : base + offset;

        const lob::Volume volume = std::max<lob::Volume>(
            1, std::llround(std::exp(rng.normal(params.volume_ln_mean, params.volume_ln_sigma))));

        place(t, side, price, volume, params.order_lifetime);
    }
    return stats;
}

} // namespace msim::synth
