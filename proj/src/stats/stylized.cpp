#include "msim/stats/stylized.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace msim::stats {

PriceSeries resample_locf(std::span<const std::pair<NanoTime, double>> observations,
                          NanoTime start, NanoTime end, NanoTime step) {
    if (step <= 0) throw std::invalid_argument("resample_locf: step must be positive");
    PriceSeries series;
    series.step = step;
    if (observations.empty()) return series;

    // first grid point at or after the first observation
    NanoTime t = start;
    while (t < observations.front().first) t += step;
    series.start = t;

    std::size_t i = 0;
    double last = observations.front().second;
    for (; t <= end; t += step) {
        while (i < observations.size() && observations[i].first <= t) last = observations[i++].second;
        series.mid.push_back(last);
    }
    return series;
}

std::vector<double> log_returns(const PriceSeries& series, int dt_steps) {
    if (dt_steps < 1) throw std::invalid_argument("log_returns: dt must be >= 1");
    const auto& m = series.mid;
    if (static_cast<int>(m.size()) <= dt_steps)
        throw std::invalid_argument("log_returns: series shorter than aggregation period");
    std::vector<double> r;
    r.reserve(m.size() - dt_steps);
    for (std::size_t t = dt_steps; t < m.size(); ++t) {
        if (m[t] <= 0.0 || m[t - dt_steps] <= 0.0)
            throw std::domain_error("log_returns: non-positive mid-price");
        r.push_back(std::log(m[t]) - std::log(m[t - dt_steps]));
    }
    return r;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("pearson: need two aligned samples");
    // zero variance means a constant sample; detect it exactly
    auto constant = [](std::span<const double> v) {
        for (const double a : v)
            if (a != v.front()) return false;
        return true;
    };
    if (constant(x) || constant(y)) return std::nullopt;

    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

std::optional<double> autocorrelation(std::span<const double> returns, int tau) {
    if (tau < 1) throw std::invalid_argument("autocorrelation: tau must be >= 1");
    if (static_cast<int>(returns.size()) < tau + 2)
        throw std::invalid_argument("autocorrelation: need at least tau + 2 observations");
    const std::size_t n = returns.size() - tau;
    return pearson(returns.subspan(0, n), returns.subspan(tau, n));
}

std::optional<double> volatility_clustering(std::span<const double> returns, int tau,
                                            bool squared) {
    std::vector<double> mag(returns.size());
    for (std::size_t i = 0; i < returns.size(); ++i)
        mag[i] = squared ? returns[i] * returns[i] : std::abs(returns[i]);
    return autocorrelation(mag, tau);
}

std::optional<double> volume_volatility_correlation(std::span<const double> volumes,
                                                    std::span<const double> abs_returns) {
    return pearson(volumes, abs_returns);
}

double excess_kurtosis(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= n;
    double m2 = 0, m4 = 0;
    for (double x : xs) {
        const double d = x - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    if (m2 <= 0.0) return 0.0;
    return m4 / (m2 * m2) - 3.0;
}

std::vector<std::optional<double>> aggregation_kurtosis(const PriceSeries& series,
                                                        std::span<const int> dt_steps,
                                                        int min_returns) {
    std::vector<std::optional<double>> out;
    out.reserve(dt_steps.size());
    for (int dt : dt_steps) {
        if (static_cast<int>(series.mid.size()) <= dt + min_returns - 1) {
            out.push_back(std::nullopt); // skipped: not enough data
            continue;
        }
        const auto r = log_returns(series, dt);
        if (static_cast<int>(r.size()) < min_returns) {
            out.push_back(std::nullopt);
            continue;
        }
        out.push_back(excess_kurtosis(r));
    }
    return out;
}

StylizedFactsReport compute_report(const std::string& trace_id, const PriceSeries& series,
                                   std::span<const double> volumes_per_bucket,
                                   const ReportOptions& opt) {
    StylizedFactsReport report;
    report.trace_id = trace_id;
    report.grid_step = series.step;
    report.n_prices = static_cast<int>(series.mid.size());
    report.kurtosis_dts.assign(opt.kurtosis_dts.begin(), opt.kurtosis_dts.end());

    if (report.n_prices >= 3) {
        const auto returns = log_returns(series, 1);
        for (int tau = 1; tau <= opt.max_lag; ++tau) {
            if (static_cast<int>(returns.size()) < tau + 2) {
                report.autocorr.push_back(std::nullopt);
                report.clustering.push_back(std::nullopt);
                continue;
            }
            report.autocorr.push_back(autocorrelation(returns, tau));
            report.clustering.push_back(
                volatility_clustering(returns, tau, opt.squared_clustering));
        }
        if (!volumes_per_bucket.empty()) {
            // bucket k covers (start + k*step, start + (k+1)*step]; returns
            // align one-to-one starting at the first bucket
            std::vector<double> abs_r(returns.size());
            for (std::size_t i = 0; i < returns.size(); ++i) abs_r[i] = std::abs(returns[i]);
            const std::size_t n = std::min(abs_r.size(), volumes_per_bucket.size());
            if (n >= 2)
                report.volume_volatility = volume_volatility_correlation(
                    volumes_per_bucket.subspan(0, n), std::span(abs_r).subspan(0, n));
        }
    } else {
        report.autocorr.assign(opt.max_lag, std::nullopt);
        report.clustering.assign(opt.max_lag, std::nullopt);
    }

    report.kurtosis = aggregation_kurtosis(series, report.kurtosis_dts, opt.min_returns);
    return report;
}

std::string report_to_json(const StylizedFactsReport& report) {
    nlohmann::ordered_json j;
    j["trace_id"] = report.trace_id;
    j["grid_step_seconds"] = static_cast<double>(report.grid_step) / 1e9;
    j["n_prices"] = report.n_prices;
    auto curve = [](const std::vector<std::optional<double>>& vs) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& v : vs)
            arr.push_back(v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr));
        return arr;
    };
    j["autocorrelation"] = curve(report.autocorr);
    j["volatility_clustering"] = curve(report.clustering);
    j["volume_volatility"] =
        report.volume_volatility ? nlohmann::ordered_json(*report.volume_volatility)
                                 : nlohmann::ordered_json(nullptr);
    j["kurtosis_dt_steps"] = report.kurtosis_dts;
    j["excess_kurtosis"] = curve(report.kurtosis);
    return j.dump(2);
}

} // namespace msim::stats
