#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "msim/stats/stylized.hpp"
#include "msim/util/rng.hpp"

using namespace msim;
using namespace msim::stats;

namespace {

PriceSeries series_from_returns(const std::vector<double>& returns, double m0 = 100.0) {
    PriceSeries series;
    series.start = 0;
    series.step = kNsPerMin;
    series.mid.push_back(m0);
    double log_m = std::log(m0);
    for (const double r : returns) {
        log_m += r;
        series.mid.push_back(std::exp(log_m));
    }
    return series;
}

std::vector<double> gaussian_returns(std::uint64_t seed, int n, double sigma = 1e-3) {
    Rng rng(seed, 77);
    std::vector<double> r(n);
    for (double& v : r) v = sigma * rng.normal();
    return r;
}

// sigma2_t = omega + alpha r_{t-1}^2 + beta sigma2_{t-1}
std::vector<double> garch_returns(std::uint64_t seed, int n, double omega, double alpha,
                                  double beta) {
    Rng rng(seed, 78);
    std::vector<double> r(n);
    double sigma2 = omega / (1.0 - alpha - beta);
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
        sigma2 = omega + alpha * prev * prev + beta * sigma2;
        prev = std::sqrt(sigma2) * rng.normal();
        r[i] = prev;
    }
    return r;
}

// Student-t with 3 degrees of freedom: z / sqrt(chi2_3 / 3)
std::vector<double> student_t3_returns(std::uint64_t seed, int n, double scale = 1e-3) {
    Rng rng(seed, 79);
    std::vector<double> r(n);
    for (double& v : r) {
        double chi2 = 0.0;
        for (int k = 0; k < 3; ++k) {
            const double z = rng.normal();
            chi2 += z * z;
        }
        v = scale * rng.normal() / std::sqrt(chi2 / 3.0);
    }
    return r;
}

} // namespace

TEST_CASE("resample_locf carries the last observation forward without gaps") {
    std::vector<std::pair<NanoTime, double>> obs = {
        {5, 10.0}, {12, 11.0}, {31, 9.0}};
    const PriceSeries series = resample_locf(obs, 0, 40, 10);
    CHECK(series.start == 10); // first grid point at/after the first observation
    REQUIRE(series.mid.size() == 4);
    CHECK(series.mid[0] == 10.0); // t=10: obs at 5
    CHECK(series.mid[1] == 11.0); // t=20: obs at 12
    CHECK(series.mid[2] == 11.0); // t=30: gap filled
    CHECK(series.mid[3] == 9.0);  // t=40: obs at 31
}

TEST_CASE("log returns: constant, doubling, telescoping") {
    PriceSeries constant;
    constant.mid.assign(100, 42.0);
    for (const double r : log_returns(constant, 1)) CHECK(r == 0.0);

    PriceSeries doubling;
    double m = 1.0;
    for (int i = 0; i < 20; ++i, m *= 2.0) doubling.mid.push_back(m);
    for (const double r : log_returns(doubling, 1))
        CHECK(r == doctest::Approx(std::log(2.0)).epsilon(1e-12));

    const auto returns = gaussian_returns(1, 200);
    const PriceSeries series = series_from_returns(returns);
    const auto r1 = log_returns(series, 1);
    const auto r2 = log_returns(series, 2);
    for (std::size_t i = 0; i < r2.size(); ++i)
        CHECK(r2[i] == doctest::Approx(r1[i] + r1[i + 1]).epsilon(1e-9));

    PriceSeries bad;
    bad.mid = {1.0, -2.0, 3.0};
    CHECK_THROWS_AS(log_returns(bad, 1), std::domain_error);
}

TEST_CASE("autocorrelation: exact cases") {
    // alternating +r, -r: C(1) = -1
    std::vector<double> alternating;
    for (int i = 0; i < 100; ++i) alternating.push_back(i % 2 == 0 ? 0.01 : -0.01);
    CHECK(*autocorrelation(alternating, 1) == doctest::Approx(-1.0).epsilon(1e-12));

    // exact periodicity: r_{t+3} = r_t gives C(3) = 1
    std::vector<double> periodic;
    for (int i = 0; i < 99; ++i) periodic.push_back(std::array{0.5, -1.0, 0.25}[i % 3]);
    CHECK(*autocorrelation(periodic, 3) == doctest::Approx(1.0).epsilon(1e-12));

    // zero variance is undefined, never silently zero
    std::vector<double> flat(50, 0.123);
    CHECK(!autocorrelation(flat, 1).has_value());
}

TEST_CASE("iid gaussian autocorrelation stays inside the 2/sqrt(n) band") {
    const int n = 10000;
    int inside = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto r = gaussian_returns(100 + trial, n);
        const double c1 = *autocorrelation(r, 1);
        if (std::abs(c1) < 2.0 / std::sqrt(static_cast<double>(n))) ++inside;
    }
    CHECK(inside >= 95);
}

TEST_CASE("volatility clustering: iid flat, garch positive, constant undefined") {
    const auto iid = gaussian_returns(7, 10000);
    CHECK(std::abs(*volatility_clustering(iid, 1)) < 0.03);

    const auto garch = garch_returns(8, 10000, 1e-6, 0.1, 0.85);
    CHECK(*volatility_clustering(garch, 1) > 0.05);

    std::vector<double> constant_magnitude;
    for (int i = 0; i < 100; ++i) constant_magnitude.push_back(i % 2 == 0 ? 0.01 : -0.01);
    CHECK(!volatility_clustering(constant_magnitude, 1).has_value());

    // squared variant also sees the clustering
    CHECK(*volatility_clustering(garch, 1, /*squared=*/true) > 0.05);
}

TEST_CASE("volume/volatility correlation: proportional, anti, shuffled") {
    const auto r = gaussian_returns(9, 2000);
    std::vector<double> abs_r(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) abs_r[i] = std::abs(r[i]);

    std::vector<double> proportional(abs_r.size());
    for (std::size_t i = 0; i < abs_r.size(); ++i) proportional[i] = 3.0 * abs_r[i];
    CHECK(*volume_volatility_correlation(proportional, abs_r) ==
          doctest::Approx(1.0).epsilon(1e-9));

    std::vector<double> anti(abs_r.size());
    for (std::size_t i = 0; i < abs_r.size(); ++i) anti[i] = 1.0 - abs_r[i];
    CHECK(*volume_volatility_correlation(anti, abs_r) == doctest::Approx(-1.0).epsilon(1e-9));

    // permutation oracle: shuffling the volumes kills the correlation
    std::vector<double> shuffled = proportional;
    Rng rng(10, 80);
    for (std::size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1],
                  shuffled[static_cast<std::size_t>(rng.uniform_int(0, i - 1))]);
    CHECK(std::abs(*volume_volatility_correlation(shuffled, abs_r)) < 0.06);

    std::vector<double> zero_var(abs_r.size(), 5.0);
    CHECK(!volume_volatility_correlation(zero_var, abs_r).has_value());
}

TEST_CASE("kurtosis oracles: gaussian thin, t(3) fat, aggregation thins the tails") {
    const auto gauss = gaussian_returns(11, 10000);
    CHECK(std::abs(excess_kurtosis(gauss)) < 0.2);

    const auto t3 = student_t3_returns(12, 10000);
    const PriceSeries series = series_from_returns(t3, 100.0);
    const std::vector<int> dts = {1, 30};
    const auto kurt = aggregation_kurtosis(series, dts);
    REQUIRE(kurt.size() == 2);
    REQUIRE(kurt[0].has_value());
    REQUIRE(kurt[1].has_value());
    CHECK(*kurt[0] > 2.0);       // fat tails at the finest aggregation
    CHECK(*kurt[1] < *kurt[0]);  // aggregation normality

    // insufficient data is a skipped marker, not a number
    PriceSeries tiny;
    tiny.mid.assign(40, 100.0);
    const std::vector<int> dt1 = {1};
    CHECK(!aggregation_kurtosis(tiny, dt1)[0].has_value());
}

TEST_CASE("report fields are invariant under uniform price scaling") {
    const auto returns = garch_returns(13, 5000, 1e-6, 0.1, 0.85);
    PriceSeries series = series_from_returns(returns, 50.0);
    std::vector<double> volumes(series.mid.size(), 0.0);
    Rng rng(14, 81);
    for (double& v : volumes) v = rng.uniform(100.0, 1000.0);

    ReportOptions opt;
    const auto a = compute_report("a", series, volumes, opt);

    PriceSeries scaled = series;
    for (double& m : scaled.mid) m *= 739.25;
    const auto b = compute_report("b", scaled, volumes, opt);

    for (int tau = 0; tau < opt.max_lag; ++tau) {
        REQUIRE(a.autocorr[tau].has_value());
        CHECK(*a.autocorr[tau] == doctest::Approx(*b.autocorr[tau]).epsilon(1e-12));
        CHECK(*a.clustering[tau] == doctest::Approx(*b.clustering[tau]).epsilon(1e-12));
    }
    CHECK(*a.volume_volatility == doctest::Approx(*b.volume_volatility).epsilon(1e-12));
    for (std::size_t i = 0; i < a.kurtosis.size(); ++i)
        if (a.kurtosis[i])
            CHECK(*a.kurtosis[i] == doctest::Approx(*b.kurtosis[i]).epsilon(1e-12));
}

TEST_CASE("correlations always land in [-1, 1]") {
    Rng rng(15, 82);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(200), y(200);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = rng.normal() + 0.3 * (i % 7);
            y[i] = 0.5 * x[i] + rng.normal();
        }
        const auto c = pearson(x, y);
        REQUIRE(c.has_value());
        CHECK(*c >= -1.0);
        CHECK(*c <= 1.0);
    }
}

TEST_CASE("report json marks undefined metrics as null") {
    PriceSeries flat;
    flat.start = 0;
    flat.step = kNsPerMin;
    flat.mid.assign(500, 100.0);
    const auto report = compute_report("flat", flat, {}, {});
    const std::string json_text = report_to_json(report);
    CHECK(json_text.find("null") != std::string::npos);
    CHECK(!report.autocorr[0].has_value()); // zero variance -> undefined
}
