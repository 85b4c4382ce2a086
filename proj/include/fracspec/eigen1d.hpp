#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "fracspec/fracops.hpp"
#include "fracspec/grid.hpp"
#include "fracspec/kernel.hpp"
#include "fracspec/linalg.hpp"
#include "fracspec/parallel.hpp"

namespace fracspec {

/// Symmetrically weighted Nystrom matrix of the Green kernel, together with
/// the grid and quadrature weights that produced it.
struct KernelMatrix {
    Grid1D grid;
    DenseMatrix entries;           // W^{1/2} G W^{1/2}, symmetric by construction
    std::vector<double> weights;   // trapezoid weights, positive, sum to b-a
};

/// Eigenvalues mu_k of the fractional two-point operator with Dirichlet
/// conditions, with Nystrom eigenfunctions and operator residuals.
struct SpectralResult {
    std::vector<double> eigenvalues;       // ascending, mu = 1/eta
    std::vector<GridFn1D> eigenfunctions;  // unit discrete L2 norm, sign-fixed
    std::vector<double> residuals;         // ||D^a Dc^a u - mu u||_2 on the interior
    std::size_t mesh_size = 0;
    bool spectrum_positive = true;  // false flags nonpositive kernel eigenvalues
};

/// Graded mesh used for the Nystrom discretization; the grading exponent
/// 2/alpha compensates the kernel-derivative blow-up at the endpoints.
inline Grid1D default_eigen_grid(const KernelParams& p, std::size_t n) {
    return Grid1D::graded(p.a, p.b, n, 2.0 / p.alpha.alpha);
}

/// Assemble M = W^{1/2} G W^{1/2} with G_ij = G(x_i, x_j). Only the upper
/// triangle is evaluated; the lower is mirrored, so symmetry is exact.
inline KernelMatrix assemble_green_matrix(const KernelParams& p, const Grid1D& grid) {
    grid.validate();
    if (grid.size() < 16)
        throw std::invalid_argument("assemble_green_matrix: need at least 16 nodes");
    if (grid.a < p.a || grid.b > p.b)
        throw std::invalid_argument("assemble_green_matrix: grid outside [a,b]");

    const std::size_t n = grid.size();
    const double kaa = K_diag_closed_form(p, p.a);
    std::vector<double> ka(n);  // K(a, x_i)
    parallel_for(0, n, [&](std::size_t i) { ka[i] = eval_K(p, p.a, grid.nodes[i]).value; });

    std::vector<double> w = trapezoid_weights(grid);
    std::vector<double> sw(n);
    for (std::size_t i = 0; i < n; ++i) sw[i] = std::sqrt(w[i]);

    DenseMatrix M(n);
    parallel_for(0, n, [&](std::size_t i) {
        for (std::size_t j = i; j < n; ++j) {
            const double kij = (i == j) ? K_diag_closed_form(p, grid.nodes[i])
                                        : eval_K(p, grid.nodes[i], grid.nodes[j]).value;
            const double g = kij - ka[i] * ka[j] / kaa;
            M.at(i, j) = sw[i] * sw[j] * g;
        }
    });
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) M.at(i, j) = M.at(j, i);

    return {grid, std::move(M), std::move(w)};
}

namespace detail {

// Weighted L2 norm of the operator residual, evaluated away from the
// endpoints (central 80% of the interval) where the differentiation
// stencils and the kernel singularity do not pollute the estimate.
inline double operator_residual(const KernelParams& p, const GridFn1D& u, double mu) {
    const GridFn1D applied =
        rl_derivative_left(caputo_derivative_right(u, p.alpha), p.alpha);
    const std::vector<double> w = trapezoid_weights(u.grid);
    const double margin = 0.1 * (p.b - p.a);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double x = u.grid.nodes[i];
        if (x < p.a + margin || x > p.b - margin) continue;
        const double r = applied.values[i] - mu * u.values[i];
        acc += w[i] * r * r;
    }
    return std::sqrt(acc);
}

}  // namespace detail

/// First k eigenvalues of D^alpha_{a+} Dc^alpha_{b-} with Dirichlet data,
/// via the Nystrom matrix of the Green kernel: mu = 1/eta for the k largest
/// kernel eigenvalues eta. Only well-resolved modes are reported (k <= n/4).
inline SpectralResult eigen_frac1d(const KernelParams& p, std::size_t n, std::size_t k) {
    if (k == 0) throw std::invalid_argument("eigen_frac1d: k must be positive");
    if (k > n / 4) throw std::invalid_argument("eigen_frac1d: k exceeds n/4");

    const KernelMatrix km = assemble_green_matrix(p, default_eigen_grid(p, n));
    const EigenDecomposition eig = jacobi_eigensolve(km.entries);

    SpectralResult out;
    out.mesh_size = n;
    const std::size_t total = eig.values.size();
    for (std::size_t j = 0; j < k; ++j) {
        const double eta = eig.values[total - 1 - j];  // descending kernel eigenvalues
        if (!(eta > 0.0)) {
            out.spectrum_positive = false;
            continue;
        }
        const double mu = 1.0 / eta;

        std::vector<double> u(total);
        double mean = 0.0;
        for (std::size_t i = 0; i < total; ++i) {
            u[i] = eig.vectors.at(i, total - 1 - j) / std::sqrt(km.weights[i]);
            mean += km.weights[i] * u[i];
        }
        if (mean < 0.0)
            for (double& v : u) v = -v;

        GridFn1D fn(km.grid, std::move(u));
        out.residuals.push_back(detail::operator_residual(p, fn, mu));
        out.eigenfunctions.push_back(std::move(fn));
        out.eigenvalues.push_back(mu);
    }
    return out;
}

/// Scaling diagnostic: mu_1 on [a,b] against mu_1 on the stretched interval
/// [a, a + stretch*(b-a)] at the same node count. The exact law is
/// mu_1(stretched)/mu_1 = stretch^{-2 alpha}.
struct ScalingReport {
    double mu_base = 0.0;
    double mu_stretched = 0.0;
    double ratio = 0.0;
    double expected = 0.0;
    double relative_deviation = 0.0;
};

inline ScalingReport eigen_scaling_check(const KernelParams& p, double stretch,
                                         std::size_t n = 64) {
    if (!(stretch > 0.0)) throw std::invalid_argument("eigen_scaling_check: stretch <= 0");
    const SpectralResult base = eigen_frac1d(p, n, 1);
    const KernelParams stretched(p.alpha, p.a, p.a + stretch * (p.b - p.a));
    const SpectralResult str = eigen_frac1d(stretched, n, 1);
    ScalingReport rep;
    rep.mu_base = base.eigenvalues.at(0);
    rep.mu_stretched = str.eigenvalues.at(0);
    rep.ratio = rep.mu_stretched / rep.mu_base;
    rep.expected = std::pow(stretch, -2.0 * p.alpha.alpha);
    rep.relative_deviation = std::abs(rep.ratio / rep.expected - 1.0);
    return rep;
}

}  // namespace fracspec
