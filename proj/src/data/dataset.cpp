#include "msim/data/dataset.hpp"

#include <algorithm>

namespace msim::data {

std::vector<AnnotatedOrder> annotate_orders(const std::vector<LobsterEvent>& events,
                                            NanoTime session_open) {
    std::vector<AnnotatedOrder> orders;
    orders.reserve(events.size());

    // carry-forwards for one-sided books; callers replay data that opens
    // with both sides populated, so these only matter at the very start
    std::optional<lob::SnapshotLevel> last_bid, last_ask;
    std::optional<double> last_mid;
    NanoTime last_order_time = -1;

    for (const LobsterEvent& ev : events) {
        if (const auto bid = ev.book.best_bid()) last_bid = bid;
        if (const auto ask = ev.book.best_ask()) last_ask = ask;
        if (const auto mid = ev.book.mid()) last_mid = mid->ticks();

        if (ev.msg.type != kNewOrder) continue;

        AnnotatedOrder order;
        order[kPrice] = static_cast<double>(ev.msg.price);
        order[kVolume] = static_cast<double>(ev.msg.size);
        order[kDirection] = ev.msg.direction;
        const double gap = last_order_time < 0
                               ? kMinInterarrivalNs
                               : static_cast<double>(ev.msg.time - last_order_time);
        order[kTime] = std::max(gap, kMinInterarrivalNs);
        order[kBestBidPrice] = last_bid ? static_cast<double>(last_bid->price)
                                        : static_cast<double>(ev.msg.price);
        order[kBestBidVolume] = last_bid ? static_cast<double>(last_bid->volume) : 0.0;
        order[kBestAskPrice] = last_ask ? static_cast<double>(last_ask->price)
                                        : static_cast<double>(ev.msg.price);
        order[kBestAskVolume] = last_ask ? static_cast<double>(last_ask->volume) : 0.0;
        order[kMidPrice] = last_mid ? *last_mid : static_cast<double>(ev.msg.price);
        order[kTimePeriod] = static_cast<double>(ev.msg.time - session_open) / 1e9;

        orders.push_back(order);
        last_order_time = ev.msg.time;
    }
    return orders;
}

std::array<std::vector<double>, kFeatureCount>
feature_columns(const std::vector<AnnotatedOrder>& orders) {
    std::array<std::vector<double>, kFeatureCount> cols;
    for (auto& c : cols) c.reserve(orders.size());
    for (const AnnotatedOrder& order : orders)
        for (int f = 0; f < kFeatureCount; ++f) cols[f].push_back(order[f]);
    return cols;
}

std::vector<TrainingPair> build_training_pairs(const std::vector<AnnotatedOrder>& orders,
                                               const ScalerSet& scalers, int n_history) {
    std::vector<TrainingPair> pairs;
    if (static_cast<int>(orders.size()) <= n_history) return pairs;
    pairs.reserve(orders.size() - n_history);

    std::deque<AnnotatedOrder> history(orders.begin(), orders.begin() + n_history);
    for (std::size_t t = n_history; t < orders.size(); ++t) {
        auto window = build_feature_window(history, scalers, n_history);
        TrainingPair pair;
        pair.y = std::move(window->y);
        for (int f = 0; f < 4; ++f)
            pair.target[f] = scalers.feature[f].transform_clipped(orders[t][f], nullptr);
        pairs.push_back(std::move(pair));

        history.pop_front();
        history.push_back(orders[t]);
    }
    return pairs;
}

} // namespace msim::data
