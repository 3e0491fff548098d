#include "msim/gan/sampling.hpp"

#include <cmath>

namespace msim::gan {

GeneratedOrder sample_order(const GeneratorParams& p, const ModelHyper& hyper,
                            std::span<const double> y, Rng& rng,
                            const data::ScalerSet& scalers) {
    std::vector<double> z(hyper.n_noise);
    for (double& v : z) v = rng.normal();

    GeneratedOrder order;
    order.normalized = generator_forward(z, y, p, hyper);

    const double raw_price = scalers.feature[data::kPrice].inverse(order.normalized.price);
    order.price = std::max<lob::Ticks>(1, std::llround(raw_price));

    const double raw_volume = scalers.feature[data::kVolume].inverse(order.normalized.volume);
    order.volume = std::max<lob::Volume>(1, std::llround(raw_volume));

    order.direction = order.normalized.direction < 0.0 ? -1 : 1;

    const double raw_gap = scalers.feature[data::kTime].inverse(order.normalized.time);
    order.interarrival_ns = std::max<std::int64_t>(1, std::llround(raw_gap));
    return order;
}

} // namespace msim::gan
