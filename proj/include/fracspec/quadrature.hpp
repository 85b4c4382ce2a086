#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fracspec/linalg.hpp"

namespace fracspec {

/// Nodes and weights of a quadrature rule on the reference interval [0,1]
/// with weight function u^beta:
///     integral_0^1 u^beta g(u) du  ~=  sum_k weights[k] * g(nodes[k]).
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

/// Gauss rule for the Jacobi weight (1-x)^0 (1+x)^beta on [-1,1] via
/// Golub-Welsch: nodes are eigenvalues of the tridiagonal recurrence
/// matrix, weights come from first eigenvector components.
inline QuadRule build_jacobi_rule(double beta, int npts) {
    if (!(beta > -1.0)) throw std::invalid_argument("jacobi_rule: beta must exceed -1");
    if (npts < 1) throw std::invalid_argument("jacobi_rule: need at least one point");
    const double a = 0.0;
    const double b = beta;
    const std::size_t n = static_cast<std::size_t>(npts);

    std::vector<double> alpha(n), sqrt_beta(n, 0.0);
    alpha[0] = (b - a) / (a + b + 2.0);
    for (std::size_t k = 1; k < n; ++k) {
        const double kk = static_cast<double>(k);
        const double den = (2.0 * kk + a + b) * (2.0 * kk + a + b + 2.0);
        alpha[k] = (b * b - a * a) / den;
    }
    if (n > 1) {
        sqrt_beta[1] = std::sqrt(4.0 * (a + 1.0) * (b + 1.0) /
                                 ((a + b + 2.0) * (a + b + 2.0) * (a + b + 3.0)));
        for (std::size_t k = 2; k < n; ++k) {
            const double kk = static_cast<double>(k);
            const double num = 4.0 * kk * (kk + a) * (kk + b) * (kk + a + b);
            const double den = (2.0 * kk + a + b) * (2.0 * kk + a + b) *
                               (2.0 * kk + a + b + 1.0) * (2.0 * kk + a + b - 1.0);
            sqrt_beta[k] = std::sqrt(num / den);
        }
    }

    DenseMatrix J(n);
    for (std::size_t k = 0; k < n; ++k) {
        J.at(k, k) = alpha[k];
        if (k + 1 < n) {
            J.at(k, k + 1) = sqrt_beta[k + 1];
            J.at(k + 1, k) = sqrt_beta[k + 1];
        }
    }
    const EigenDecomposition eig = jacobi_eigensolve(J, 1e-15, 80);

    // zeroth moment of (1+x)^beta on [-1,1]
    const double mu0 = std::pow(2.0, beta + 1.0) / (beta + 1.0);

    QuadRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double xi = eig.values[k];
        const double v0 = eig.vectors.at(0, k);
        // map [-1,1] -> [0,1]: u = (1+xi)/2, weight carries 2^{-beta-1}
        rule.nodes[k] = 0.5 * (1.0 + xi);
        rule.weights[k] = mu0 * v0 * v0 * std::pow(2.0, -beta - 1.0);
    }
    return rule;
}

}  // namespace detail

/// Cached rule for integral_0^1 u^beta g(u) du. The cache is read-only after
/// insertion, so returned references stay valid and can be shared across
/// threads.
inline const QuadRule& power_weight_rule(double beta, int npts) {
    static std::map<std::pair<std::uint64_t, int>, QuadRule> cache;
    static std::mutex mtx;
    std::uint64_t key_bits;
    std::memcpy(&key_bits, &beta, sizeof(beta));
    const auto key = std::make_pair(key_bits, npts);
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, detail::build_jacobi_rule(beta, npts)).first;
    return it->second;
}

/// integral_0^L u^beta g(u) du with the cached rule (exact scaling of the
/// reference rule: nodes scale by L, weights by L^{beta+1}).
template <class G>
double integrate_power_weighted(double beta, double L, int npts, G&& g) {
    if (!(L > 0.0)) return 0.0;
    const QuadRule& rule = power_weight_rule(beta, npts);
    const double scale = std::pow(L, beta + 1.0);
    double s = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        s += rule.weights[k] * g(L * rule.nodes[k]);
    return scale * s;
}

/// Plain Gauss-Legendre on [lo,hi] (the beta = 0 rule, shifted).
template <class G>
double integrate_gauss(double lo, double hi, int npts, G&& g) {
    if (!(hi > lo)) return 0.0;
    const QuadRule& rule = power_weight_rule(0.0, npts);
    const double len = hi - lo;
    double s = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k)
        s += rule.weights[k] * g(lo + len * rule.nodes[k]);
    return len * s;
}

}  // namespace fracspec
