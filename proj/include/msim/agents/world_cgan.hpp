#pragma once

#include <deque>
#include <unordered_map>
#include <vector>

#include "msim/data/dataset.hpp"
#include "msim/data/features.hpp"
#include "msim/gan/sampling.hpp"
#include "msim/sim/exchange_agent.hpp"

namespace msim::agents {

struct CganWorldConfig {
    NanoTime session_open = 0;   // time-period feature reference
    NanoTime warmup_until = 0;   // historical replay runs until here
    NanoTime order_ttl = 5 * 60 * kNsPerSec; // generated orders auto-expire
    int market_data_depth = 1;
};

// The world agent: replays historical flow through the warm-up window to
// build real conditioning context, then generates orders one at a time,
// each conditioned on the live book (the reactivity channel).
class CganWorldAgent : public sim::Agent {
public:
    CganWorldAgent(CganWorldConfig cfg, gan::ModelHyper hyper, gan::GeneratorParams params,
                   data::ScalerSet scalers, std::vector<data::LobsterEvent> warmup_stream);

    void on_start(sim::Kernel& kernel) override;
    void on_event(sim::Kernel& kernel, const sim::Event& ev) override;

    const std::deque<data::AnnotatedOrder>& history() const { return history_; }
    std::int64_t generated_count() const { return generated_count_; }
    std::int64_t clip_count() const { return clip_count_; }

private:
    enum WakeTag { kReplayStep = 1, kGenerate = 2 };

    void on_wakeup(sim::Kernel& kernel, int tag);
    void replay_step(sim::Kernel& kernel);
    void schedule_after_replay(sim::Kernel& kernel);
    void on_market_data(sim::Kernel& kernel, const sim::BookView& view);
    void on_execution(const sim::ExecutionReport& report);
    lob::OrderId next_order_id();

    CganWorldConfig cfg_;
    gan::ModelHyper hyper_;
    gan::GeneratorParams params_;
    data::ScalerSet scalers_;
    std::vector<data::LobsterEvent> warmup_stream_;
    std::size_t cursor_ = 0;

    std::deque<data::AnnotatedOrder> history_;
    struct PendingOrder {
        double price, volume, direction, interarrival;
        NanoTime submit_time;
    };
    std::unordered_map<lob::OrderId, PendingOrder> pending_;
    std::unordered_map<std::uint64_t, lob::OrderId> replay_ids_;

    // carry-forward book context for annotations
    double last_bid_px_ = 0, last_bid_vol_ = 0, last_ask_px_ = 0, last_ask_vol_ = 0;
    double last_mid_ = 0;
    bool book_seen_ = false;

    NanoTime last_order_time_ = -1;
    std::uint64_t order_counter_ = 0;
    std::int64_t generated_count_ = 0;
    std::int64_t clip_count_ = 0;
};

} // namespace msim::agents
