#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fracspec/grid.hpp"

namespace fracspec {

/// Fractional order in (0,1]. The boundary-value operator additionally
/// requires alpha > 1/2; that is enforced by KernelParams, not here.
struct FracOrder {
    double alpha;
    explicit FracOrder(double a) : alpha(a) {
        if (!(a > 0.0) || !(a <= 1.0))
            throw std::invalid_argument("FracOrder: alpha must lie in (0,1]");
    }
};

namespace detail {

// (hi^p - lo^p) computed without cancellation for 0 <= lo < hi.
inline double pow_diff(double lo, double hi, double p) {
    if (lo == 0.0) return std::pow(hi, p);
    return std::pow(lo, p) * std::expm1(p * std::log1p((hi - lo) / lo));
}

// Derivative weights at `at` of the quadratic interpolant through x0,x1,x2.
inline std::array<double, 3> lagrange3_deriv(double x0, double x1, double x2, double at) {
    return {(2.0 * at - x1 - x2) / ((x0 - x1) * (x0 - x2)),
            (2.0 * at - x0 - x2) / ((x1 - x0) * (x1 - x2)),
            (2.0 * at - x0 - x1) / ((x2 - x0) * (x2 - x1))};
}

}  // namespace detail

/// First derivative on a (possibly non-uniform) grid: centered 3-point
/// stencils inside, one-sided second-order stencils at the endpoints.
inline GridFn1D derivative_3pt(const GridFn1D& f) {
    f.validate();
    const auto& x = f.grid.nodes;
    const auto& v = f.values;
    const std::size_t n = x.size();
    std::vector<double> d(n);
    {
        const auto w = detail::lagrange3_deriv(x[0], x[1], x[2], x[0]);
        d[0] = w[0] * v[0] + w[1] * v[1] + w[2] * v[2];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const auto w = detail::lagrange3_deriv(x[i - 1], x[i], x[i + 1], x[i]);
        d[i] = w[0] * v[i - 1] + w[1] * v[i] + w[2] * v[i + 1];
    }
    {
        const auto w = detail::lagrange3_deriv(x[n - 3], x[n - 2], x[n - 1], x[n - 1]);
        d[n - 1] = w[0] * v[n - 3] + w[1] * v[n - 2] + w[2] * v[n - 1];
    }
    return GridFn1D(f.grid, std::move(d));
}

/// Left Riemann-Liouville integral I^alpha_{a+} f at the grid nodes.
/// Product integration: the power kernel is integrated exactly against the
/// piecewise-linear interpolant of f, panel by panel.
inline GridFn1D rl_integral_left(const GridFn1D& f, FracOrder order) {
    f.validate();
    const double alpha = order.alpha;
    const auto& x = f.grid.nodes;
    const auto& v = f.values;
    const std::size_t n = x.size();
    const double inv_gamma = 1.0 / std::tgamma(alpha);
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < i; ++j) {
            const double A = x[i] - x[j];      // distance to panel left edge
            const double B = x[i] - x[j + 1];  // distance to panel right edge
            const double h = x[j + 1] - x[j];
            const double m0 = detail::pow_diff(B, A, alpha) / alpha;
            const double m1 = detail::pow_diff(B, A, alpha + 1.0) / (alpha + 1.0);
            acc += v[j] * (m1 - B * m0) / h + v[j + 1] * (A * m0 - m1) / h;
        }
        out[i] = inv_gamma * acc;
    }
    return GridFn1D(f.grid, std::move(out));
}

/// Right Riemann-Liouville integral I^alpha_{b-} f at the grid nodes.
inline GridFn1D rl_integral_right(const GridFn1D& f, FracOrder order) {
    f.validate();
    const double alpha = order.alpha;
    const auto& x = f.grid.nodes;
    const auto& v = f.values;
    const std::size_t n = x.size();
    const double inv_gamma = 1.0 / std::tgamma(alpha);
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = i; j + 1 < n; ++j) {
            const double B = x[j] - x[i];
            const double A = x[j + 1] - x[i];
            const double h = x[j + 1] - x[j];
            const double m0 = detail::pow_diff(B, A, alpha) / alpha;
            const double m1 = detail::pow_diff(B, A, alpha + 1.0) / (alpha + 1.0);
            acc += v[j] * (A * m0 - m1) / h + v[j + 1] * (m1 - B * m0) / h;
        }
        out[i] = inv_gamma * acc;
    }
    return GridFn1D(f.grid, std::move(out));
}

/// Left Riemann-Liouville derivative D^alpha_{a+} f = d/dx I^{1-alpha}_{a+} f.
/// At alpha = 1 the inner integral is the identity and this is the plain
/// first derivative.
inline GridFn1D rl_derivative_left(const GridFn1D& f, FracOrder order) {
    f.validate();
    if (f.size() < 5)
        throw std::invalid_argument("rl_derivative_left: need at least 5 nodes");
    if (order.alpha == 1.0) return derivative_3pt(f);
    const GridFn1D g = rl_integral_left(f, FracOrder(1.0 - order.alpha));
    return derivative_3pt(g);
}

/// Right Caputo derivative with the standard sign convention,
/// -I^{1-alpha}_{b-} f', so alpha = 1 gives -f' and the composition
/// D^alpha_{a+} (this) reduces to -d^2/dx^2 at alpha = 1.
inline GridFn1D caputo_derivative_right(const GridFn1D& f, FracOrder order) {
    f.validate();
    if (f.size() < 5)
        throw std::invalid_argument("caputo_derivative_right: need at least 5 nodes");
    GridFn1D df = derivative_3pt(f);
    if (order.alpha == 1.0) {
        for (double& v : df.values) v = -v;
        return df;
    }
    GridFn1D g = rl_integral_right(df, FracOrder(1.0 - order.alpha));
    for (double& v : g.values) v = -v;
    return g;
}

}  // namespace fracspec
