#pragma once

#include "msim/sim/exchange_agent.hpp"

namespace msim::agents {

struct PovConfig {
    double lambda = 0.25;                // fraction of observed volume, (0,1]
    NanoTime wakeup_period = 60 * kNsPerSec;
    lob::Side direction = lob::Side::Buy;
    lob::Volume target = 0;              // tau: stop once this many shares transact
    NanoTime start = 0;                  // active window
    NanoTime end = 0;
};

// Percentage-of-volume execution agent: every wakeup it observes the volume
// transacted since the previous one and sends a marketable order for
// lambda * V_t shares, capped so cumulative executions never pass tau.
class PovAgent : public sim::Agent {
public:
    explicit PovAgent(PovConfig cfg);

    void on_start(sim::Kernel& kernel) override;
    void on_event(sim::Kernel& kernel, const sim::Event& ev) override;

    lob::Volume transacted() const { return transacted_; }
    std::int64_t orders_sent() const { return orders_sent_; }

private:
    PovConfig cfg_;
    lob::Volume last_seen_volume_ = 0;
    bool baseline_taken_ = false;
    lob::Volume transacted_ = 0;
    std::int64_t orders_sent_ = 0;
    std::uint64_t order_counter_ = 0;
    bool stopped_ = false;
};

} // namespace msim::agents
