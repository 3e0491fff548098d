#include "msim/data/features.hpp"

namespace msim::data {

std::optional<FeatureWindow> build_feature_window(const std::deque<AnnotatedOrder>& history,
                                                  const ScalerSet& scalers, int n_history,
                                                  std::int64_t* clip_count) {
    if (static_cast<int>(history.size()) < n_history) return std::nullopt;

    FeatureWindow window;
    window.history = n_history;
    window.y.resize(static_cast<std::size_t>(n_history) * kFeatureCount);

    const std::size_t newest = history.size() - 1;
    for (int i = 0; i < n_history; ++i) {
        const AnnotatedOrder& order = history[newest - i];
        double* block = window.y.data() + static_cast<std::size_t>(i) * kFeatureCount;
        for (int f = 0; f < kFeatureCount; ++f)
            block[f] = scalers.feature[f].transform_clipped(order[f], clip_count);
    }
    return window;
}

} // namespace msim::data
