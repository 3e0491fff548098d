#pragma once

#include <string>
#include <vector>

#include "msim/lob/order_book.hpp"
#include "msim/sim/kernel.hpp"

namespace msim::sim {

// NASDAQ-like exchange: one book, price-then-FIFO matching, priority 0 in the
// event loop so order flow settles before same-time agent wakeups.
class ExchangeAgent : public Agent {
public:
    struct OrderActionRecord {
        NanoTime time = 0;
        AgentId agent = -1;
        int side = 0; // +1/-1, 0 for cancels
        lob::Ticks price = 0;
        lob::Volume volume = 0;
        lob::OrderId order_id = 0;
        std::string event; // submit / cancel / expire / reject / cancel_miss
    };

    struct MidSample {
        NanoTime time = 0;
        std::optional<lob::MidPrice> mid;
    };

    bool is_exchange() const override { return true; }
    void on_event(Kernel& kernel, const Event& ev) override;

    const lob::OrderBook& book() const { return book_; }
    const std::vector<OrderActionRecord>& order_log() const { return order_log_; }
    const std::vector<MidSample>& mid_trace() const { return mid_trace_; }
    std::int64_t cancels_not_found() const { return cancels_not_found_; }

    BookView view(NanoTime now) const;

private:
    void record_mid(NanoTime now);

    lob::OrderBook book_;
    std::vector<OrderActionRecord> order_log_;
    std::vector<MidSample> mid_trace_;
    std::int64_t cancels_not_found_ = 0;
};

} // namespace msim::sim
