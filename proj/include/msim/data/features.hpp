#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "msim/data/scalers.hpp"

namespace msim::data {

// One order with the market context observed when it entered the book,
// in raw units. Normalization happens at window-build time.
struct AnnotatedOrder {
    std::array<double, kFeatureCount> raw{};

    double& operator[](int f) { return raw[f]; }
    double operator[](int f) const { return raw[f]; }
};

// Conditioning vector y, length 10*N, most-recent order first: block i
// (i = 0..N-1) holds the normalized features of the order issued i+1
// steps back.
struct FeatureWindow {
    int history = 0;
    std::vector<double> y;
};

// history is ordered oldest -> newest; the newest entry maps to block 0.
// Returns nullopt while fewer than `history` orders are available.
std::optional<FeatureWindow> build_feature_window(const std::deque<AnnotatedOrder>& history,
                                                  const ScalerSet& scalers, int n_history,
                                                  std::int64_t* clip_count = nullptr);

} // namespace msim::data
