#pragma once

#include <array>
#include <vector>

#include "msim/data/features.hpp"
#include "msim/data/lobster.hpp"

namespace msim::data {

// Interarrival floor: simultaneous messages exist in the data and log-like
// transforms need positivity.
inline constexpr double kMinInterarrivalNs = 1.0;

// New-order messages annotated with the book row recorded just after each
// one. Interarrival is measured between consecutive new orders.
std::vector<AnnotatedOrder> annotate_orders(const std::vector<LobsterEvent>& events,
                                            NanoTime session_open);

// Column view used for scaler fitting.
std::array<std::vector<double>, kFeatureCount>
feature_columns(const std::vector<AnnotatedOrder>& orders);

struct TrainingPair {
    std::vector<double> y;        // normalized window, 10*N
    std::array<double, 4> target; // normalized next order (price, volume, direction, time)
};

// Stride-1 pairs over the session: the window of the N preceding orders
// against the order that followed them.
std::vector<TrainingPair> build_training_pairs(const std::vector<AnnotatedOrder>& orders,
                                               const ScalerSet& scalers, int n_history);

} // namespace msim::data
