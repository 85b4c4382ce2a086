#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fracspec {

/// Dense row-major square matrix of doubles.
struct DenseMatrix {
    std::size_t n = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n_) : n(n_), data(n_ * n_, 0.0) {}

    double& at(std::size_t i, std::size_t j) { return data[i * n + j]; }
    double at(std::size_t i, std::size_t j) const { return data[i * n + j]; }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : data) s += v * v;
        return std::sqrt(s);
    }
};

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    DenseMatrix vectors;         // column k is the eigenvector of values[k]
};

/// Dense symmetric eigensolver: cyclic Jacobi rotations, sweeping all
/// off-diagonal pairs until the off-diagonal Frobenius norm drops below
/// tol relative to the matrix norm. Throws after max_sweeps sweeps.
inline EigenDecomposition jacobi_eigensolve(DenseMatrix A, double tol = 1e-12,
                                            int max_sweeps = 50) {
    const std::size_t n = A.n;
    if (n == 0) throw std::invalid_argument("jacobi_eigensolve: empty matrix");
    DenseMatrix V(n);
    for (std::size_t i = 0; i < n; ++i) V.at(i, i) = 1.0;

    const double scale = std::max(1.0, A.frobenius_norm());
    auto off_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) s += A.at(i, j) * A.at(i, j);
        return std::sqrt(2.0 * s);
    };

    // Rotations below this size cannot push the off-diagonal norm above the
    // convergence threshold, so they are skipped.
    const double skip_thresh = tol * scale / (2.0 * static_cast<double>(n));

    int sweeps = 0;
    while (off_norm() > tol * scale) {
        if (++sweeps > max_sweeps)
            throw std::runtime_error("jacobi_eigensolve: no convergence within sweep limit");
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = A.at(p, q);
                if (std::abs(apq) <= skip_thresh) continue;
                const double app = A.at(p, p);
                const double aqq = A.at(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                double* rp = &A.data[p * n];
                double* rq = &A.data[q * n];
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = rp[k];
                    const double akq = rq[k];
                    rp[k] = c * akp - s * akq;
                    rq[k] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = A.at(k, p);
                    const double akq = A.at(k, q);
                    A.at(k, p) = c * akp - s * akq;
                    A.at(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = V.at(k, p);
                    const double vkq = V.at(k, q);
                    V.at(k, p) = c * vkp - s * vkq;
                    V.at(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return A.at(i, i) < A.at(j, j); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = DenseMatrix(n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = A.at(order[k], order[k]);
        for (std::size_t i = 0; i < n; ++i) out.vectors.at(i, k) = V.at(i, order[k]);
    }
    return out;
}

/// Cholesky factorization A = L L^T (lower triangle returned).
/// Throws std::runtime_error if the matrix is not positive definite.
inline DenseMatrix cholesky(const DenseMatrix& A) {
    const std::size_t n = A.n;
    DenseMatrix L(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = A.at(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= L.at(i, k) * L.at(j, k);
            if (i == j) {
                if (!(s > 0.0))
                    throw std::runtime_error("cholesky: matrix not positive definite");
                L.at(i, i) = std::sqrt(s);
            } else {
                L.at(i, j) = s / L.at(j, j);
            }
        }
    }
    return L;
}

inline std::vector<double> cholesky_solve(const DenseMatrix& L, std::vector<double> b) {
    const std::size_t n = L.n;
    if (b.size() != n) throw std::invalid_argument("cholesky_solve: size mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= L.at(i, k) * b[k];
        b[i] = s / L.at(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= L.at(k, ii) * b[k];
        b[ii] = s / L.at(ii, ii);
    }
    return b;
}

struct SmallestEigenpair {
    double value = 0.0;
    std::vector<double> vector;
    std::size_t iterations = 0;
};

/// Smallest eigenvalue of a symmetric positive definite matrix by inverse
/// power iteration on a Cholesky-factored solve (shift 0). Converges when
/// the eigenvalue estimate changes by less than rel_tol relatively.
inline SmallestEigenpair inverse_power_iteration(const DenseMatrix& A, double rel_tol = 1e-10,
                                                 std::size_t max_iters = 20000) {
    const std::size_t n = A.n;
    const DenseMatrix L = cholesky(A);
    std::vector<double> v(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * static_cast<double>(i % 7);
    auto normalize = [&](std::vector<double>& x) {
        double s = 0.0;
        for (double t : x) s += t * t;
        s = std::sqrt(s);
        for (double& t : x) t /= s;
        return s;
    };
    normalize(v);

    double lambda = 0.0;
    for (std::size_t it = 1; it <= max_iters; ++it) {
        std::vector<double> w = cholesky_solve(L, v);
        const double wnorm = normalize(w);
        // Rayleigh quotient of A at w
        double num = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            const double* row = &A.data[i * n];
            for (std::size_t j = 0; j < n; ++j) s += row[j] * w[j];
            num += w[i] * s;
        }
        const double lam = num;
        const bool done = it > 1 && std::abs(lam - lambda) <= rel_tol * std::abs(lam);
        lambda = lam;
        v = std::move(w);
        (void)wnorm;
        if (done) return {lambda, v, it};
    }
    throw std::runtime_error("inverse_power_iteration: no convergence");
}

}  // namespace fracspec
