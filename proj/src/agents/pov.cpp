#include "msim/agents/pov.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace msim::agents {

using namespace sim;

PovAgent::PovAgent(PovConfig cfg) : cfg_(cfg) {
    if (!(cfg_.lambda > 0.0 && cfg_.lambda <= 1.0))
        throw std::invalid_argument("pov: lambda must be in (0,1]");
    if (cfg_.target < 1) throw std::invalid_argument("pov: target must be >= 1");
    if (cfg_.start >= cfg_.end) throw std::invalid_argument("pov: empty active window");
}

void PovAgent::on_start(Kernel& kernel) {
    kernel.schedule(std::max(cfg_.start, kernel.config().start_time), id(), Wakeup{0});
}

void PovAgent::on_event(Kernel& kernel, const Event& ev) {
    if (std::holds_alternative<Wakeup>(ev.payload)) {
        const NanoTime now = kernel.now();
        if (stopped_ || now > cfg_.end || transacted_ >= cfg_.target) {
            stopped_ = true;
            return;
        }
        kernel.send(kernel.exchange_id(), MarketDataRequest{id(), 1});
        if (now + cfg_.wakeup_period <= cfg_.end)
            kernel.schedule(now + cfg_.wakeup_period, id(), Wakeup{0});
        return;
    }

    if (const auto* reply = std::get_if<MarketDataReply>(&ev.payload)) {
        const NanoTime now = kernel.now();
        if (stopped_ || now > cfg_.end) return;
        const lob::Volume observed = reply->view.cumulative_traded - last_seen_volume_;
        last_seen_volume_ = reply->view.cumulative_traded;
        if (!baseline_taken_) {
            // first wakeup only sets the observation baseline
            baseline_taken_ = true;
            return;
        }
        const lob::Volume want = static_cast<lob::Volume>(
            std::llround(cfg_.lambda * static_cast<double>(observed)));
        const lob::Volume size = std::min(want, cfg_.target - transacted_);
        if (size < 1) return;

        lob::Order order;
        order.id = (static_cast<lob::OrderId>(id()) + 1) << 40 | ++order_counter_;
        order.side = cfg_.direction;
        order.volume = size;
        order.marketable_only = true; // consume liquidity, discard the rest
        order.price = cfg_.direction == lob::Side::Buy
                          ? std::numeric_limits<lob::Ticks>::max() / 4
                          : 1;
        kernel.send(kernel.exchange_id(), SubmitOrderMsg{id(), order, 0});
        ++orders_sent_;
        return;
    }

    if (const auto* report = std::get_if<ExecutionReport>(&ev.payload)) {
        transacted_ += report->executed;
        if (transacted_ >= cfg_.target) stopped_ = true;
        return;
    }
}

} // namespace msim::agents
