#include "msim/data/scalers.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace msim::data {

const char* feature_name(int f) {
    switch (f) {
        case kPrice: return "price";
        case kVolume: return "volume";
        case kDirection: return "direction";
        case kTime: return "time";
        case kBestBidPrice: return "best_bid_price";
        case kBestBidVolume: return "best_bid_volume";
        case kBestAskPrice: return "best_ask_price";
        case kBestAskVolume: return "best_ask_volume";
        case kMidPrice: return "mid_price";
        case kTimePeriod: return "time_period";
        default: throw std::out_of_range("feature index");
    }
}

ScalerFitResult fit_scalers(const std::array<std::vector<double>, kFeatureCount>& values) {
    ScalerFitResult result;
    for (int f = 0; f < kFeatureCount; ++f) {
        if (values[f].empty()) throw std::invalid_argument("fit_scalers: empty training stream");
        FeatureScaler& fs = result.scalers.feature[f];

        if (f == kDirection) {
            // already in the target range; fixed so a one-sided sample
            // cannot degenerate the scaler
            fs.minmax = MinMaxScaler{-1.0, 1.0};
            continue;
        }

        std::vector<double> transformed;
        if (feature_uses_boxcox(f)) {
            fs.box = fit_boxcox(values[f]);
            transformed.reserve(values[f].size());
            for (double x : values[f]) transformed.push_back(boxcox(x, *fs.box));
        } else {
            transformed = values[f];
        }
        const auto [lo_it, hi_it] = std::minmax_element(transformed.begin(), transformed.end());
        fs.minmax = MinMaxScaler{*lo_it, *hi_it};
        if (fs.minmax.degenerate())
            result.warnings.push_back(std::string("feature '") + feature_name(f) +
                                      "' is constant; scaling it to 0");
    }
    return result;
}

std::string ScalerSet::to_json_string() const {
    nlohmann::ordered_json j;
    for (int f = 0; f < kFeatureCount; ++f) {
        const FeatureScaler& fs = feature[f];
        nlohmann::ordered_json entry;
        if (fs.box)
            entry["boxcox"] = {{"lambda", fs.box->lambda}, {"shift", fs.box->shift}};
        else
            entry["boxcox"] = nullptr;
        entry["minmax"] = {{"lo", fs.minmax.lo}, {"hi", fs.minmax.hi}};
        j[feature_name(f)] = entry;
    }
    return j.dump(2);
}

ScalerSet ScalerSet::from_json_string(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    ScalerSet s;
    for (int f = 0; f < kFeatureCount; ++f) {
        const auto& entry = j.at(feature_name(f));
        FeatureScaler& fs = s.feature[f];
        if (!entry.at("boxcox").is_null())
            fs.box = BoxCoxParam{entry["boxcox"].at("lambda").get<double>(),
                                 entry["boxcox"].at("shift").get<double>()};
        fs.minmax.lo = entry.at("minmax").at("lo").get<double>();
        fs.minmax.hi = entry.at("minmax").at("hi").get<double>();
    }
    return s;
}

void ScalerSet::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << to_json_string() << '\n';
}

ScalerSet ScalerSet::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_string(text);
}

} // namespace msim::data
