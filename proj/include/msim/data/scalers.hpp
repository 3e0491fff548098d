#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msim/data/boxcox.hpp"

namespace msim::data {

// The 10 conditioning features, in wire order: the order 4-tuple followed by
// the book 6-tuple observed when the order was issued.
enum Feature : int {
    kPrice = 0,
    kVolume = 1,
    kDirection = 2,
    kTime = 3, // interarrival, ns
    kBestBidPrice = 4,
    kBestBidVolume = 5,
    kBestAskPrice = 6,
    kBestAskVolume = 7,
    kMidPrice = 8,
    kTimePeriod = 9, // seconds since session open
};

inline constexpr int kFeatureCount = 10;

const char* feature_name(int f);

// Box-cox applies to size, interarrival time and the two touch volumes.
inline constexpr bool feature_uses_boxcox(int f) {
    return f == kVolume || f == kTime || f == kBestBidVolume || f == kBestAskVolume;
}

struct MinMaxScaler {
    double lo = 0.0;
    double hi = 0.0;

    bool degenerate() const { return !(lo < hi); }

    // [lo,hi] -> [-1,1]; a degenerate scaler maps everything to 0
    double scale(double x) const {
        if (degenerate()) return 0.0;
        return 2.0 * (x - lo) / (hi - lo) - 1.0;
    }
    double unscale(double s) const {
        if (degenerate()) return lo;
        return lo + 0.5 * (s + 1.0) * (hi - lo);
    }
};

struct FeatureScaler {
    std::optional<BoxCoxParam> box;
    MinMaxScaler minmax;

    double transform(double raw) const {
        return minmax.scale(box ? boxcox(raw, *box) : raw);
    }
    // live path: out-of-range values are clipped into [-1,1]
    double transform_clipped(double raw, std::int64_t* clip_count) const {
        double s = transform(raw);
        if (s < -1.0 || s > 1.0) {
            if (clip_count) ++*clip_count;
            s = s < -1.0 ? -1.0 : 1.0;
        }
        return s;
    }
    double inverse(double scaled) const {
        const double u = minmax.unscale(scaled);
        return box ? inverse_boxcox(u, *box) : u;
    }
};

struct ScalerSet {
    std::array<FeatureScaler, kFeatureCount> feature{};

    std::string to_json_string() const;
    static ScalerSet from_json_string(const std::string& text);
    void save(const std::string& path) const;
    static ScalerSet load(const std::string& path);
};

struct ScalerFitResult {
    ScalerSet scalers;
    std::vector<std::string> warnings; // degenerate-feature notes
};

// Column-major feature samples: values[f] holds every training value of
// feature f. Box-cox is fitted first (ML), min-max over transformed values.
ScalerFitResult fit_scalers(const std::array<std::vector<double>, kFeatureCount>& values);

} // namespace msim::data
