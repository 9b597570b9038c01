#pragma once

#include <cmath>
#include <span>

#include "selfcorrect/errors.hpp"

namespace selfcorrect {

struct LinearFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
    size_t points = 0;
};

// Ordinary least squares y = intercept + slope * x.
inline LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ContractError("least_squares: size mismatch");
    if (x.size() < 2) throw ContractError("least_squares: need at least two points");
    size_t n = x.size();
    double sx = 0, sy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / double(n), my = sy / double(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0) throw ContractError("least_squares: degenerate x values");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.points = n;
    if (syy == 0)
        fit.r2 = 1.0;
    else {
        double ss_res = syy - fit.slope * sxy;
        fit.r2 = 1.0 - ss_res / syy;
    }
    return fit;
}

}  // namespace selfcorrect
