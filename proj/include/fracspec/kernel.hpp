#pragma once

#include <cmath>
#include <stdexcept>

#include "fracspec/fracops.hpp"
#include "fracspec/quadrature.hpp"

namespace fracspec {

/// Parameters of the interval kernels: fractional order alpha in (1/2, 1]
/// and the interval [a,b]. alpha > 1/2 keeps the diagonal finite.
struct KernelParams {
    FracOrder alpha;
    double a;
    double b;

    KernelParams(FracOrder ord, double a_, double b_) : alpha(ord), a(a_), b(b_) {
        if (!(a < b)) throw std::invalid_argument("KernelParams: require a < b");
        if (!(2.0 * alpha.alpha - 1.0 > 0.0))
            throw std::invalid_argument("KernelParams: require alpha > 1/2");
    }
};

/// A kernel value together with an a-posteriori error estimate obtained by
/// doubling the quadrature order.
struct KernelEval {
    double x = 0.0;
    double t = 0.0;
    double value = 0.0;
    double abs_error_estimate = 0.0;
};

namespace detail {

// integral_0^L u^{alpha-1} (u+d)^{alpha-1} du for d > 0, at a given base
// order. The left endpoint singularity u^{alpha-1} is handled by a
// Gauss-Jacobi rule; on [d,L] geometric panels keep both singularities
// (u = 0 and u = -d) a fixed relative distance away, so plain Gauss
// converges spectrally on each panel.
inline double kernel_integral_offdiag(double L, double d, double alpha, int order) {
    const double beta = alpha - 1.0;
    auto smooth = [&](double u) { return std::pow(u + d, beta); };
    if (d >= L) return integrate_power_weighted(beta, L, order, smooth);
    double total = integrate_power_weighted(beta, d, order, smooth);
    double lo = d;
    while (lo < L) {
        const double hi = std::min(3.0 * lo, L);
        total += integrate_gauss(lo, hi, order,
                                 [&](double u) { return std::pow(u, beta) * smooth(u); });
        lo = hi;
    }
    return total;
}

// Same integral on the diagonal (d = 0), where the integrand is the pure
// power u^{2 alpha - 2}: geometric panels down to a small cutoff, then a
// Gauss-Jacobi closure with the combined weight exponent.
inline double kernel_integral_diag(double L, double alpha, int order) {
    const double beta2 = 2.0 * alpha - 2.0;
    const double cutoff = L * 5.90e-7;  // 3^-12
    double total = integrate_power_weighted(beta2, cutoff, order, [](double) { return 1.0; });
    double lo = cutoff;
    while (lo < L) {
        const double hi = std::min(3.0 * lo, L);
        total += integrate_gauss(lo, hi, order, [&](double u) { return std::pow(u, beta2); });
        lo = hi;
    }
    return total;
}

}  // namespace detail

/// Closed-form diagonal value K(x,x) = (b-x)^{2a-1} / (Gamma(a)^2 (2a-1)).
inline double K_diag_closed_form(const KernelParams& p, double x) {
    const double alpha = p.alpha.alpha;
    const double g = std::tgamma(alpha);
    return std::pow(p.b - x, 2.0 * alpha - 1.0) / (g * g * (2.0 * alpha - 1.0));
}

/// K(x,t) evaluated purely by quadrature (no closed-form shortcut), with an
/// order-doubling error estimate. Used directly by validation suites.
inline KernelEval eval_K_quadrature(const KernelParams& p, double x, double t, int order = 16) {
    if (x < p.a || x > p.b || t < p.a || t > p.b)
        throw std::domain_error("eval_K: point outside [a,b]");
    const double alpha = p.alpha.alpha;
    const double m = std::max(x, t);
    const double d = m - std::min(x, t);
    const double L = p.b - m;
    const double g = std::tgamma(alpha);
    const double inv_g2 = 1.0 / (g * g);
    if (L <= 0.0) return {x, t, 0.0, 0.0};
    double coarse, fine;
    if (d == 0.0) {
        coarse = detail::kernel_integral_diag(L, alpha, order);
        fine = detail::kernel_integral_diag(L, alpha, 2 * order);
    } else {
        coarse = detail::kernel_integral_offdiag(L, d, alpha, order);
        fine = detail::kernel_integral_offdiag(L, d, alpha, 2 * order);
    }
    return {x, t, fine * inv_g2, std::abs(fine - coarse) * inv_g2};
}

/// K(x,t) = 1/Gamma(a)^2 * integral_{max(x,t)}^{b} (s-x)^{a-1} (s-t)^{a-1} ds.
/// The diagonal short-circuits to the closed form; alpha = 1 reduces to
/// b - max(x,t) exactly.
inline KernelEval eval_K(const KernelParams& p, double x, double t) {
    if (x < p.a || x > p.b || t < p.a || t > p.b)
        throw std::domain_error("eval_K: point outside [a,b]");
    const double m = std::max(x, t);
    if (p.alpha.alpha == 1.0) return {x, t, p.b - m, 0.0};
    if (x == t) {
        const double v = K_diag_closed_form(p, x);
        return {x, t, v, 4.0 * 2.2e-16 * std::abs(v)};
    }
    return eval_K_quadrature(p, x, t);
}

/// G(x,t) = K(x,t) - K(a,t) K(x,a) / K(a,a), assembled from kernel
/// evaluations plus the closed-form K(a,a); error estimates add up.
inline KernelEval eval_G(const KernelParams& p, double x, double t) {
    const KernelEval kxt = eval_K(p, x, t);
    const KernelEval kat = eval_K(p, p.a, t);
    const KernelEval kxa = eval_K(p, x, p.a);
    const double kaa = K_diag_closed_form(p, p.a);
    const double value = kxt.value - kat.value * kxa.value / kaa;
    const double err = kxt.abs_error_estimate +
                       (std::abs(kxa.value) * kat.abs_error_estimate +
                        std::abs(kat.value) * kxa.abs_error_estimate) /
                           kaa;
    return {x, t, value, err};
}

/// Diagonal of the Green kernel, G(x,x).
inline double G_diag(const KernelParams& p, double x) {
    const double kxx = K_diag_closed_form(p, x);
    const KernelEval kxa = eval_K(p, x, p.a);
    return kxx - kxa.value * kxa.value / K_diag_closed_form(p, p.a);
}

struct DiagSup {
    double x_star = 0.0;
    double value = 0.0;
};

/// Maximizes x -> G(x,x) over (a,b): a 64-sample bracketing scan followed by
/// golden-section refinement down to an interval of 1e-10 * (b-a).
inline DiagSup sup_G_diag(const KernelParams& p) {
    const int samples = 64;
    const double span = p.b - p.a;
    double best_x = p.a + 0.5 * span;
    double best_v = -1.0;
    for (int i = 0; i < samples; ++i) {
        const double x = p.a + span * (i + 0.5) / samples;
        const double v = G_diag(p, x);
        if (v > best_v) {
            best_v = v;
            best_x = x;
        }
    }
    double lo = std::max(p.a, best_x - span / samples);
    double hi = std::min(p.b, best_x + span / samples);

    const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = G_diag(p, x1);
    double f2 = G_diag(p, x2);
    while (hi - lo > 1e-10 * span) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = G_diag(p, x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = G_diag(p, x1);
        }
    }
    const double xs = 0.5 * (lo + hi);
    return {xs, G_diag(p, xs)};
}

}  // namespace fracspec
