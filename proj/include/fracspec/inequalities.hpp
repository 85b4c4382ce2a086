#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fracspec/eigen1d.hpp"
#include "fracspec/fraclap.hpp"
#include "fracspec/grid.hpp"
#include "fracspec/kernel.hpp"

namespace fracspec {

/// Outcome of a necessary-condition audit. `satisfied = false` means no
/// nontrivial solution can exist for the given potential; the checks do not
/// decide solvability in the other direction.
struct InequalityContext {
    double alpha = 0.0;
    double a = 0.0;
    double b = 0.0;
    double lambda1 = 0.0;
    std::string domain_id;
};

struct InequalityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    double margin = 0.0;    // lhs - rhs
    bool equality = false;  // |lhs - rhs| within the comparison tolerance
    InequalityContext context;
};

namespace detail {

inline InequalityReport make_report(double lhs, double rhs, InequalityContext ctx) {
    const double tol = 1e-9 * std::max(1.0, std::abs(rhs));
    InequalityReport rep;
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.margin = lhs - rhs;
    rep.satisfied = lhs >= rhs - tol;
    rep.equality = std::abs(lhs - rhs) <= tol;
    rep.context = std::move(ctx);
    return rep;
}

}  // namespace detail

/// Lyapunov audit: integral of |q - lambda1| over [a,b] (trapezoid on the
/// sampling grid) against 1 / sup_x G(x,x). Both sides depend on q only
/// through the pointwise difference q - lambda1.
inline InequalityReport lyapunov_check(const GridFn1D& q, FracOrder alpha, double lambda1) {
    q.validate();
    if (!(lambda1 >= 0.0)) throw std::invalid_argument("lyapunov_check: lambda1 must be >= 0");
    const KernelParams p(alpha, q.grid.a, q.grid.b);
    const std::vector<double> w = trapezoid_weights(q.grid);
    double lhs = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) lhs += w[i] * std::abs(q.values[i] - lambda1);
    const double rhs = 1.0 / sup_G_diag(p).value;
    return detail::make_report(lhs, rhs,
                               {alpha.alpha, q.grid.a, q.grid.b, lambda1, std::string{}});
}

/// Hartman-Wintner audit: the diagonal kernel weight
/// K(a,a) K(s,s) - K(a,s)^2 integrated against the positive part of
/// q - lambda1, compared with K(a,a) = (b-a)^{2a-1} / (Gamma(a)^2 (2a-1)).
inline InequalityReport hartman_wintner_check(const GridFn1D& q, FracOrder alpha,
                                              double lambda1) {
    q.validate();
    if (!(lambda1 >= 0.0))
        throw std::invalid_argument("hartman_wintner_check: lambda1 must be >= 0");
    const KernelParams p(alpha, q.grid.a, q.grid.b);
    const double kaa = K_diag_closed_form(p, p.a);
    const std::vector<double> w = trapezoid_weights(q.grid);
    double lhs = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        const double excess = q.values[i] - lambda1;
        if (excess <= 0.0) continue;
        const double x = q.grid.nodes[i];
        const double kxx = K_diag_closed_form(p, x);
        const double kax = eval_K(p, p.a, x).value;
        lhs += w[i] * (kaa * kxx - kax * kax) * excess;
    }
    return detail::make_report(lhs, kaa,
                               {alpha.alpha, q.grid.a, q.grid.b, lambda1, std::string{}});
}

/// Cylinder (a,b) x Omega with fractional orders alpha (axial) and s
/// (cross-sectional).
struct CylinderSpec {
    KernelParams interval;
    double s;
    DomainMask2D cross_section;

    CylinderSpec(KernelParams iv, double s_, DomainMask2D cs)
        : interval(std::move(iv)), s(s_), cross_section(std::move(cs)) {
        if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("CylinderSpec: s outside (0,1)");
        cross_section.validate();
    }
};

struct CylinderNu1 {
    double nu1 = 0.0;
    double mu1 = 0.0;
    double lambda1 = 0.0;
};

/// First eigenvalue of the cylinder operator by separation of variables:
/// nu1 = mu1(alpha; a,b) + lambda1(Omega). The additivity is exact by
/// construction.
inline CylinderNu1 cylinder_nu1(const CylinderSpec& spec, std::size_t n_1d) {
    const SpectralResult sr = eigen_frac1d(spec.interval, n_1d, 1);
    const double mu1 = sr.eigenvalues.at(0);
    const double lam = lambda1(fraclap_matrix_2d(spec.cross_section, spec.s)).lambda;
    return {mu1 + lam, mu1, lam};
}

/// One row of a Rayleigh-Faber-Krahn sweep.
struct RfkRow {
    std::string shape_id;
    std::size_t cells = 0;
    double lambda1 = 0.0;
    double nu1 = 0.0;
};

struct RfkTable {
    std::vector<RfkRow> rows;  // ascending by nu1, ties by shape id
    double mu1 = 0.0;          // shape-independent axial eigenvalue
    std::string minimizer;
};

/// Computes lambda1 and nu1 for each cross-section of equal cell count
/// (equal measure at grid resolution) and reports the minimizer. The
/// axial mu1 is computed once.
inline RfkTable rfk_sweep(const std::vector<std::pair<std::string, DomainMask2D>>& shapes,
                          const KernelParams& interval, double s, std::size_t n_1d = 129) {
    if (shapes.size() < 2) throw std::invalid_argument("rfk_sweep: need at least 2 shapes");
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("rfk_sweep: s outside (0,1)");
    const std::size_t cells = shapes.front().second.cell_count();
    for (const auto& [id, mask] : shapes) {
        mask.validate();
        if (mask.cell_count() != cells)
            throw std::invalid_argument("rfk_sweep: shapes must have equal cell counts");
    }
    const double mu1 = eigen_frac1d(interval, n_1d, 1).eigenvalues.at(0);

    RfkTable table;
    table.mu1 = mu1;
    for (const auto& [id, mask] : shapes) {
        const double lam = lambda1(fraclap_matrix_2d(mask, s)).lambda;
        table.rows.push_back({id, cells, lam, mu1 + lam});
    }
    std::sort(table.rows.begin(), table.rows.end(), [](const RfkRow& a, const RfkRow& b) {
        if (a.nu1 != b.nu1) return a.nu1 < b.nu1;
        return a.shape_id < b.shape_id;
    });
    table.minimizer = table.rows.front().shape_id;
    return table;
}

}  // namespace fracspec
