#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msim/util/time.hpp"

namespace msim::stats {

// Mid-prices on a regular grid (last observation carried forward).
struct PriceSeries {
    NanoTime start = 0;
    NanoTime step = kNsPerMin;
    std::vector<double> mid; // tick units
};

// Resamples irregular (time, mid) observations onto [start, end] with the
// given step. Grid points before the first observation are dropped so the
// series has no gaps.
PriceSeries resample_locf(std::span<const std::pair<NanoTime, double>> observations,
                          NanoTime start, NanoTime end, NanoTime step);

// r(t) = ln m(t) - ln m(t - dt_steps), overlapping. Throws on non-positive
// prices.
std::vector<double> log_returns(const PriceSeries& series, int dt_steps);

// Pearson correlation; nullopt when either side has zero variance
// (undefined is signaled, never silently 0).
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

// corr(r_t, r_{t+tau}); requires tau + 2 observations.
std::optional<double> autocorrelation(std::span<const double> returns, int tau);

// corr(|r_t|, |r_{t+tau}|); squared variant behind the flag.
std::optional<double> volatility_clustering(std::span<const double> returns, int tau,
                                            bool squared = false);

std::optional<double> volume_volatility_correlation(std::span<const double> volumes,
                                                    std::span<const double> abs_returns);

double excess_kurtosis(std::span<const double> xs);

// Per-aggregation excess kurtosis; nullopt marks "skipped" for periods with
// fewer than min_returns observations.
std::vector<std::optional<double>> aggregation_kurtosis(const PriceSeries& series,
                                                        std::span<const int> dt_steps,
                                                        int min_returns = 100);

struct StylizedFactsReport {
    std::string trace_id;
    NanoTime grid_step = kNsPerMin;
    int n_prices = 0;
    std::vector<std::optional<double>> autocorr;   // tau = 1..L
    std::vector<std::optional<double>> clustering; // tau = 1..L
    std::optional<double> volume_volatility;
    std::vector<int> kurtosis_dts; // in grid steps
    std::vector<std::optional<double>> kurtosis;
};

struct ReportOptions {
    int max_lag = 20;
    std::vector<int> kurtosis_dts = {1, 5, 15, 30};
    bool squared_clustering = false;
    int min_returns = 100;
};

// volumes_per_bucket must align with the series grid (one bucket per step,
// starting at series.start); pass empty when unavailable.
StylizedFactsReport compute_report(const std::string& trace_id, const PriceSeries& series,
                                   std::span<const double> volumes_per_bucket,
                                   const ReportOptions& opt = {});

std::string report_to_json(const StylizedFactsReport& report);

} // namespace msim::stats
