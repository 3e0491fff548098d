#include "msim/sim/exchange_agent.hpp"

namespace msim::sim {

BookView ExchangeAgent::view(NanoTime now) const {
    BookView v;
    v.best_bid = book_.best_bid();
    v.best_ask = book_.best_ask();
    v.mid = book_.mid();
    v.cumulative_traded = book_.cumulative_traded();
    v.time = now;
    return v;
}

void ExchangeAgent::record_mid(NanoTime now) {
    mid_trace_.push_back(MidSample{now, book_.mid()});
}

void ExchangeAgent::on_event(Kernel& kernel, const Event& ev) {
    const NanoTime now = kernel.now();

    if (const auto* submit = std::get_if<SubmitOrderMsg>(&ev.payload)) {
        lob::Order order = submit->order;
        order.timestamp = now;
        const lob::SubmitResult result = book_.submit(order);

        OrderActionRecord rec;
        rec.time = now;
        rec.agent = submit->sender;
        rec.side = lob::sign(order.side);
        rec.price = order.price;
        rec.volume = order.volume;
        rec.order_id = order.id;
        rec.event = result.accepted() ? "submit" : "reject";
        order_log_.push_back(rec);

        if (result.accepted()) {
            record_mid(now);
            if (submit->ttl > 0 && result.rested > 0)
                kernel.schedule(now + submit->ttl, id(), ExpireOrder{order.id});
        }

        ExecutionReport report;
        report.order_id = order.id;
        report.reject = result.reject;
        report.executed = result.executed;
        report.rested = result.rested;
        report.discarded = result.discarded;
        report.post = view(now);
        kernel.send(submit->sender, report);
        return;
    }

    if (const auto* cancel = std::get_if<CancelOrderMsg>(&ev.payload)) {
        const lob::CancelResult result = book_.cancel(cancel->order_id, cancel->volume);
        if (!result.found) ++cancels_not_found_;

        OrderActionRecord rec;
        rec.time = now;
        rec.agent = cancel->sender;
        rec.volume = result.cancelled;
        rec.order_id = cancel->order_id;
        rec.event = result.found ? "cancel" : "cancel_miss";
        order_log_.push_back(rec);
        if (result.found) record_mid(now);
        return;
    }

    if (const auto* mdreq = std::get_if<MarketDataRequest>(&ev.payload)) {
        kernel.send(mdreq->sender, MarketDataReply{view(now)});
        return;
    }

    if (const auto* expire = std::get_if<ExpireOrder>(&ev.payload)) {
        const lob::CancelResult result = book_.cancel(expire->order_id);
        if (result.found) {
            OrderActionRecord rec;
            rec.time = now;
            rec.agent = id();
            rec.volume = result.cancelled;
            rec.order_id = expire->order_id;
            rec.event = "expire";
            order_log_.push_back(rec);
            record_mid(now);
        }
        return;
    }
}

} // namespace msim::sim
