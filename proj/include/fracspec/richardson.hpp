#pragma once

#include <cmath>
#include <stdexcept>

namespace fracspec {

struct RichardsonResult {
    double extrapolated = 0.0;
    double rate = 0.0;         // observed convergence order (per mesh doubling)
    double uncertainty = 0.0;  // |extrapolated - finest value|
};

/// Richardson extrapolation from three values computed on meshes with
/// successively doubled resolution (coarse, mid, fine).
inline RichardsonResult richardson_extrapolate(double coarse, double mid, double fine) {
    const double d1 = coarse - mid;
    const double d2 = mid - fine;
    if (d2 == 0.0) return {fine, 0.0, 0.0};
    const double ratio = d1 / d2;
    if (!(ratio > 1.0))
        throw std::runtime_error("richardson_extrapolate: sequence is not converging");
    const double rate = std::log2(ratio);
    const double extrap = fine - d2 / (ratio - 1.0);
    return {extrap, rate, std::abs(extrap - fine)};
}

}  // namespace fracspec
