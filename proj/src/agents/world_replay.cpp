#include "msim/agents/world_replay.hpp"

#include <algorithm>

namespace msim::agents {

using namespace sim;

ReplayWorldAgent::ReplayWorldAgent(std::vector<data::LobsterEvent> stream)
    : stream_(std::move(stream)) {}

void ReplayWorldAgent::on_start(Kernel& kernel) {
    const NanoTime start = kernel.config().start_time;
    while (cursor_ < stream_.size() && stream_[cursor_].msg.time < start) ++cursor_;
    schedule_next(kernel);
}

void ReplayWorldAgent::schedule_next(Kernel& kernel) {
    if (cursor_ >= stream_.size()) return; // exhausted: the agent goes silent
    kernel.schedule(std::max(stream_[cursor_].msg.time, kernel.now()), id(),
                    Wakeup{/*tag=*/0});
}

void ReplayWorldAgent::process_one(Kernel& kernel) {
    const auto& msg = stream_[cursor_++].msg;
    switch (msg.type) {
        case data::kNewOrder: {
            const lob::OrderId oid = (static_cast<lob::OrderId>(id()) + 1) << 40 |
                                     ++order_counter_;
            id_map_[msg.order_id] = oid;
            lob::Order order;
            order.id = oid;
            order.side = lob::side_from_sign(msg.direction);
            order.price = msg.price;
            order.volume = msg.size;
            kernel.send(kernel.exchange_id(), SubmitOrderMsg{id(), order, 0});
            ++counters_.adds;
            break;
        }
        case data::kPartialCancel:
        case data::kDelete: {
            auto it = id_map_.find(msg.order_id);
            if (it == id_map_.end()) {
                // pre-session or beyond-depth order; defined no-op
                ++counters_.unknown_cancels;
                break;
            }
            CancelOrderMsg cancel;
            cancel.sender = id();
            cancel.order_id = it->second;
            if (msg.type == data::kPartialCancel) cancel.volume = msg.size;
            kernel.send(kernel.exchange_id(), cancel);
            ++counters_.cancels;
            break;
        }
        case data::kExecuteVisible:
        case data::kExecuteHidden:
            counters_.historical_exec_volume += msg.size;
            ++counters_.historical_exec_messages;
            break;
        default:
            break;
    }
}

void ReplayWorldAgent::on_event(Kernel& kernel, const Event& ev) {
    if (!std::holds_alternative<Wakeup>(ev.payload)) return;
    // drain every message stamped at this instant in file order
    const NanoTime now = kernel.now();
    while (cursor_ < stream_.size() && stream_[cursor_].msg.time <= now) process_one(kernel);
    schedule_next(kernel);
}

} // namespace msim::agents
