#include "msim/agents/world_cgan.hpp"

#include <algorithm>
#include <stdexcept>

namespace msim::agents {

using namespace sim;

CganWorldAgent::CganWorldAgent(CganWorldConfig cfg, gan::ModelHyper hyper,
                               gan::GeneratorParams params, data::ScalerSet scalers,
                               std::vector<data::LobsterEvent> warmup_stream)
    : cfg_(cfg),
      hyper_(hyper),
      params_(std::move(params)),
      scalers_(std::move(scalers)),
      warmup_stream_(std::move(warmup_stream)) {}

lob::OrderId CganWorldAgent::next_order_id() {
    return (static_cast<lob::OrderId>(id()) + 1) << 40 | ++order_counter_;
}

void CganWorldAgent::on_start(Kernel& kernel) {
    const NanoTime start = kernel.config().start_time;
    if (cfg_.warmup_until > start) {
        if (warmup_stream_.empty() || warmup_stream_.back().msg.time < cfg_.warmup_until)
            throw std::runtime_error("historical stream does not cover the warm-up window");
    }
    // skip anything recorded before the session start
    while (cursor_ < warmup_stream_.size() && warmup_stream_[cursor_].msg.time < start)
        ++cursor_;
    if (cursor_ < warmup_stream_.size() && warmup_stream_[cursor_].msg.time < cfg_.warmup_until) {
        kernel.schedule(warmup_stream_[cursor_].msg.time, id(), Wakeup{kReplayStep});
    } else {
        kernel.schedule(start, id(), Wakeup{kGenerate});
    }
}

void CganWorldAgent::replay_step(Kernel& kernel) {
    const data::LobsterEvent& ev = warmup_stream_[cursor_++];
    const auto& msg = ev.msg;

    switch (msg.type) {
        case data::kNewOrder: {
            const lob::OrderId oid = next_order_id();
            replay_ids_[msg.order_id] = oid;
            lob::Order order;
            order.id = oid;
            order.side = lob::side_from_sign(msg.direction);
            order.price = msg.price;
            order.volume = msg.size;
            // historical deletes manage removal; no synthetic expiry here
            kernel.send(kernel.exchange_id(), SubmitOrderMsg{id(), order, 0});

            PendingOrder pending;
            pending.price = static_cast<double>(msg.price);
            pending.volume = static_cast<double>(msg.size);
            pending.direction = msg.direction;
            const NanoTime now = kernel.now();
            pending.interarrival =
                last_order_time_ < 0
                    ? data::kMinInterarrivalNs
                    : std::max(static_cast<double>(now - last_order_time_),
                               data::kMinInterarrivalNs);
            pending.submit_time = now;
            pending_[oid] = pending;
            last_order_time_ = now;
            break;
        }
        case data::kPartialCancel:
        case data::kDelete: {
            auto it = replay_ids_.find(msg.order_id);
            if (it != replay_ids_.end()) {
                CancelOrderMsg cancel;
                cancel.sender = id();
                cancel.order_id = it->second;
                if (msg.type == data::kPartialCancel) cancel.volume = msg.size;
                kernel.send(kernel.exchange_id(), cancel);
            }
            break;
        }
        default:
            break; // executions arise endogenously; cross/halt are ignored
    }
    schedule_after_replay(kernel);
}

void CganWorldAgent::schedule_after_replay(Kernel& kernel) {
    const bool warm = static_cast<int>(history_.size()) + static_cast<int>(pending_.size()) >=
                      hyper_.n_history;
    if (cursor_ < warmup_stream_.size()) {
        const NanoTime next_time = warmup_stream_[cursor_].msg.time;
        if (next_time < cfg_.warmup_until || !warm) {
            kernel.schedule(std::max(next_time, kernel.now()), id(), Wakeup{kReplayStep});
            return;
        }
    }
    kernel.schedule(std::max(cfg_.warmup_until, kernel.now()), id(), Wakeup{kGenerate});
}

void CganWorldAgent::on_wakeup(Kernel& kernel, int tag) {
    if (tag == kReplayStep) {
        replay_step(kernel);
        return;
    }
    if (static_cast<int>(history_.size()) < hyper_.n_history) {
        // not enough context yet: consume more history if there is any
        if (cursor_ < warmup_stream_.size()) {
            replay_step(kernel);
            return;
        }
        if (!pending_.empty()) { // annotations still in flight at this timestamp
            kernel.schedule(kernel.now() + 1, id(), Wakeup{kGenerate});
            return;
        }
        throw std::runtime_error("insufficient warm-up: " + std::to_string(history_.size()) +
                                 " of " + std::to_string(hyper_.n_history) +
                                 " conditioning orders available");
    }
    kernel.send(kernel.exchange_id(), MarketDataRequest{id(), cfg_.market_data_depth});
}

void CganWorldAgent::on_market_data(Kernel& kernel, const BookView& view) {
    // condition on the book as it stands right now: refresh the newest
    // history entry's market context before building the window
    data::AnnotatedOrder saved = history_.back();
    data::AnnotatedOrder& newest = history_.back();
    if (view.best_bid) {
        newest[data::kBestBidPrice] = static_cast<double>(view.best_bid->price);
        newest[data::kBestBidVolume] = static_cast<double>(view.best_bid->volume);
    }
    if (view.best_ask) {
        newest[data::kBestAskPrice] = static_cast<double>(view.best_ask->price);
        newest[data::kBestAskVolume] = static_cast<double>(view.best_ask->volume);
    }
    if (view.mid) newest[data::kMidPrice] = view.mid->ticks();

    const auto window = data::build_feature_window(history_, scalers_, hyper_.n_history,
                                                   &clip_count_);
    history_.back() = saved;

    const gan::GeneratedOrder generated =
        gan::sample_order(params_, hyper_, window->y, rng(), scalers_);

    const NanoTime now = kernel.now();
    const lob::OrderId oid = next_order_id();
    lob::Order order;
    order.id = oid;
    order.side = generated.direction < 0 ? lob::Side::Sell : lob::Side::Buy;
    order.price = generated.price;
    order.volume = generated.volume;
    kernel.send(kernel.exchange_id(), SubmitOrderMsg{id(), order, cfg_.order_ttl});
    ++generated_count_;

    PendingOrder pending;
    pending.price = static_cast<double>(generated.price);
    pending.volume = static_cast<double>(generated.volume);
    pending.direction = generated.direction;
    pending.interarrival = last_order_time_ < 0
                               ? data::kMinInterarrivalNs
                               : std::max(static_cast<double>(now - last_order_time_),
                                          data::kMinInterarrivalNs);
    pending.submit_time = now;
    pending_[oid] = pending;
    last_order_time_ = now;

    // the generated interarrival is the offset to the next order
    kernel.schedule(now + generated.interarrival_ns, id(), Wakeup{kGenerate});
}

void CganWorldAgent::on_execution(const ExecutionReport& report) {
    auto it = pending_.find(report.order_id);
    if (it == pending_.end()) return;
    const PendingOrder& pending = it->second;

    const BookView& post = report.post;
    if (post.best_bid) {
        last_bid_px_ = static_cast<double>(post.best_bid->price);
        last_bid_vol_ = static_cast<double>(post.best_bid->volume);
        book_seen_ = true;
    }
    if (post.best_ask) {
        last_ask_px_ = static_cast<double>(post.best_ask->price);
        last_ask_vol_ = static_cast<double>(post.best_ask->volume);
        book_seen_ = true;
    }
    if (post.mid) last_mid_ = post.mid->ticks();

    data::AnnotatedOrder order;
    order[data::kPrice] = pending.price;
    order[data::kVolume] = pending.volume;
    order[data::kDirection] = pending.direction;
    order[data::kTime] = pending.interarrival;
    order[data::kBestBidPrice] = book_seen_ ? last_bid_px_ : pending.price;
    order[data::kBestBidVolume] = last_bid_vol_;
    order[data::kBestAskPrice] = book_seen_ ? last_ask_px_ : pending.price;
    order[data::kBestAskVolume] = last_ask_vol_;
    order[data::kMidPrice] = last_mid_ != 0 ? last_mid_ : pending.price;
    order[data::kTimePeriod] =
        static_cast<double>(pending.submit_time - cfg_.session_open) / 1e9;

    history_.push_back(order);
    while (static_cast<int>(history_.size()) > hyper_.n_history) history_.pop_front();
    pending_.erase(it);
}

void CganWorldAgent::on_event(Kernel& kernel, const Event& ev) {
    if (const auto* wake = std::get_if<Wakeup>(&ev.payload)) {
        on_wakeup(kernel, wake->tag);
    } else if (const auto* reply = std::get_if<MarketDataReply>(&ev.payload)) {
        on_market_data(kernel, reply->view);
    } else if (const auto* report = std::get_if<ExecutionReport>(&ev.payload)) {
        on_execution(*report);
    }
}

} // namespace msim::agents
