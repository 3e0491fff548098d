#pragma once

#include "msim/data/scalers.hpp"
#include "msim/gan/model.hpp"
#include "msim/lob/types.hpp"
#include "msim/util/rng.hpp"

namespace msim::gan {

struct GeneratedOrder {
    lob::Ticks price = 0;
    lob::Volume volume = 0;
    int direction = 0;
    std::int64_t interarrival_ns = 0; // delay before the next generation step
    NormalizedOrder normalized;
};

// Draws z from the caller's stream, runs the generator, and denormalizes:
// price to the nearest tick (>= 1), volume to whole shares (>= 1),
// direction by sign (0 -> buy), interarrival clamped to >= 1 ns.
GeneratedOrder sample_order(const GeneratorParams& p, const ModelHyper& hyper,
                            std::span<const double> y, Rng& rng,
                            const data::ScalerSet& scalers);

} // namespace msim::gan
