#pragma once

#include <vector>

#include "msim/data/lobster.hpp"
#include "msim/lob/order_book.hpp"
#include "msim/util/rng.hpp"

namespace msim::synth {

// Synthetic order-flow process used to manufacture LOBSTER-format samples:
//   price        = last mid -/+ a geometric tick offset (negative offsets
//                  cross the spread and trade)
//   volume       ~ log-normal, rounded to whole shares
//   direction    ~ Bernoulli leaning against the recent return sign
//   interarrival ~ exponential with a mid-price-dependent rate
// Orders expire after a fixed lifetime, recorded as delete messages, so the
// book stays stationary over arbitrarily long runs.
struct FlowParams {
    lob::Ticks initial_price = 1'000'000; // $100.00 at 1e-4 ticks
    double base_rate_hz = 2.2;            // arrivals per second at the initial mid
    double offset_geom_p = 0.30;          // geometric offset, support {1,2,...}
    int offset_shift = 2;                 // offset - shift; negative => crossing
    double volume_ln_mean = 4.6;          // ln 100
    double volume_ln_sigma = 0.8;
    double direction_beta = 0.12;         // momentum strength
    NanoTime return_lookback = 120 * kNsPerSec;
    NanoTime order_lifetime = 60 * kNsPerSec;
    double partial_cancel_prob = 0.04;
    int seed_levels = 12;                 // resting orders per side at start
    lob::Volume seed_volume = 200;
};

struct FlowStats {
    std::int64_t new_orders = 0;
    std::int64_t deletes = 0;
    std::int64_t partial_cancels = 0;
    std::int64_t executions = 0;
    lob::Volume traded_volume = 0;
};

// Runs the process through a real matching book from session_start until
// `order_target` new orders have been placed, emitting one LOBSTER message
// (+ 20-level book row) per book event. Execution rows document the trades
// the crossing adds caused; a replay therefore regenerates them endogenously.
FlowStats generate_flow(const FlowParams& params, std::uint64_t seed, NanoTime session_start,
                        std::int64_t order_target, std::vector<data::LobsterEvent>& out,
                        int depth = 20);

} // namespace msim::synth
