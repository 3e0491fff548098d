#include "msim/data/boxcox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace msim::data {

double boxcox(double x, const BoxCoxParam& p) {
    const double v = x + p.shift;
    if (v <= 0.0) throw std::domain_error("boxcox: non-positive shifted input");
    if (p.lambda == 0.0) return std::log(v);
    return (std::pow(v, p.lambda) - 1.0) / p.lambda;
}

double inverse_boxcox(double y, const BoxCoxParam& p) {
    if (p.lambda == 0.0) return std::exp(y) - p.shift;
    // keep the base positive; inverse is only meaningful on the fitted range
    const double base = std::max(p.lambda * y + 1.0, 1e-12);
    return std::pow(base, 1.0 / p.lambda) - p.shift;
}

double gaussian_loglik(std::span<const double> xs) {
    const double n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= n;
    var = std::max(var, 1e-300);
    return -0.5 * n * (std::log(2.0 * 3.14159265358979323846 * var) + 1.0);
}

BoxCoxParam fit_boxcox(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("fit_boxcox: empty sample");
    const double min_x = *std::min_element(xs.begin(), xs.end());
    BoxCoxParam p;
    p.shift = min_x <= 0.0 ? 1.0 - min_x : 0.0;

    double sum_log = 0.0;
    for (double x : xs) sum_log += std::log(x + p.shift);

    std::vector<double> transformed(xs.size());
    double best_ll = -1e300;
    double best_lambda = 1.0;
    for (int step = -200; step <= 200; ++step) {
        const double lambda = step / 100.0;
        const BoxCoxParam cand{lambda, p.shift};
        for (std::size_t i = 0; i < xs.size(); ++i) transformed[i] = boxcox(xs[i], cand);
        // profile log-likelihood: Gaussian LL of transformed data + Jacobian
        const double ll = gaussian_loglik(transformed) + (lambda - 1.0) * sum_log;
        if (ll > best_ll) {
            best_ll = ll;
            best_lambda = lambda;
        }
    }
    p.lambda = best_lambda;
    return p;
}

} // namespace msim::data
