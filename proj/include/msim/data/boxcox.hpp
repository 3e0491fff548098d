#pragma once

#include <span>

namespace msim::data {

struct BoxCoxParam {
    double lambda = 1.0;
    double shift = 0.0; // chosen so every training input is positive
};

// ((x+shift)^lambda - 1)/lambda, ln(x+shift) at lambda == 0.
// Throws std::domain_error when x + shift <= 0.
double boxcox(double x, const BoxCoxParam& p);
double inverse_boxcox(double y, const BoxCoxParam& p);

// Maximum-likelihood fit by grid search, lambda in [-2,2] step 0.01.
// shift = 1 - min(x) when min(x) <= 0, else 0.
BoxCoxParam fit_boxcox(std::span<const double> xs);

// Gaussian log-likelihood with ML mean/variance; the fit criterion, exposed
// so tests can score raw vs transformed samples.
double gaussian_loglik(std::span<const double> xs);

} // namespace msim::data
