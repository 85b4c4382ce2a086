#pragma once

#include <cmath>
#include <cstddef>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fracspec/grid.hpp"
#include "fracspec/linalg.hpp"
#include "fracspec/parallel.hpp"
#include "fracspec/quadrature.hpp"

namespace fracspec {

/// I/O failures (unreadable or malformed files); the CLI maps these to its
/// own exit code, distinct from parameter errors.
struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Discretized integral fractional Laplacian with exterior Dirichlet
/// condition. Diagonal entries are positive, off-diagonal nonpositive.
struct FracLapMatrix {
    double s = 0.5;
    int dimension = 1;
    std::size_t size = 0;
    DenseMatrix entries;
    double h = 0.0;

    // 2D bookkeeping: (row, col) of each matrix index, and the mask geometry.
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    std::size_t mask_nx = 0;
    std::size_t mask_ny = 0;
    std::pair<double, double> origin{0.0, 0.0};

    bool low_accuracy = false;  // degenerate (single-cell) masks
};

namespace detail {

// Fractional centered-difference coefficients
//   g_m = (-1)^m Gamma(2s+1) / (Gamma(s-m+1) Gamma(s+m+1)),
// generated by the stable ratio recurrence g_{m+1} = g_m (m-s)/(m+1+s).
inline std::vector<double> centered_difference_coeffs(double s, std::size_t count) {
    std::vector<double> g(count);
    const double g1 = std::tgamma(2.0 * s + 1.0);
    const double gs = std::tgamma(s + 1.0);
    g[0] = g1 / (gs * gs);
    for (std::size_t m = 0; m + 1 < count; ++m) {
        const double mm = static_cast<double>(m);
        g[m + 1] = g[m] * (mm - s) / (mm + 1.0 + s);
    }
    return g;
}

// integral over [-1,1]^2 of |z|^{-2s} dz (finite for s < 1).
inline double unit_square_moment(double s) {
    const double theta = integrate_gauss(0.0, std::numbers::pi / 4.0, 32, [&](double t) {
        return std::pow(std::cos(t), 2.0 * s - 2.0);
    });
    return 8.0 / (2.0 - 2.0 * s) * theta;
}

}  // namespace detail

/// Normalisation constant of the integral fractional Laplacian in dimension
/// N, the choice whose Fourier symbol is |xi|^{2s}.
inline double fraclap_constant(std::size_t N, double s) {
    const double num = std::pow(4.0, s) * std::tgamma(0.5 * static_cast<double>(N) + s) * s;
    const double den = std::pow(std::numbers::pi, 0.5 * static_cast<double>(N)) *
                       std::tgamma(1.0 - s);
    return num / den;
}

/// 1D matrix on the interior nodes x_i = i*h of (0, length), h = length/(n+1),
/// with zero exterior values: A_ij = h^{-2s} g_{i-j}. Symmetric positive
/// definite Toeplitz.
inline FracLapMatrix fraclap_matrix_1d(std::size_t n, double s, double length) {
    if (n < 8) throw std::invalid_argument("fraclap_matrix_1d: need n >= 8");
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("fraclap_matrix_1d: s outside (0,1)");
    if (!(length > 0.0)) throw std::invalid_argument("fraclap_matrix_1d: length must be positive");

    FracLapMatrix m;
    m.s = s;
    m.dimension = 1;
    m.size = n;
    m.h = length / static_cast<double>(n + 1);
    const std::vector<double> g = detail::centered_difference_coeffs(s, n);
    const double scale = std::pow(m.h, -2.0 * s);
    m.entries = DenseMatrix(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m.entries.at(i, j) = scale * g[i > j ? i - j : j - i];
    return m;
}

/// 2D matrix over the true cells of a mask. Far cells use midpoint
/// quadrature of the kernel; the singular 3x3 neighborhood uses a local
/// correction exact for quadratic functions; interactions beyond four
/// domain diameters are absorbed into an analytic exterior weight.
inline FracLapMatrix fraclap_matrix_2d(const DomainMask2D& mask, double s) {
    mask.validate();
    if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("fraclap_matrix_2d: s outside (0,1)");

    FracLapMatrix m;
    m.s = s;
    m.dimension = 2;
    m.h = mask.h;
    m.mask_nx = mask.nx;
    m.mask_ny = mask.ny;
    m.origin = mask.origin;
    for (std::size_t r = 0; r < mask.ny; ++r)
        for (std::size_t c = 0; c < mask.nx; ++c)
            if (mask.at(r, c)) m.cells.emplace_back(r, c);
    const std::size_t n = m.cells.size();
    m.size = n;
    m.low_accuracy = (n == 1);

    // bounding-box diagonal (cell units) bounds the domain diameter
    std::size_t r0 = mask.ny, r1 = 0, c0 = mask.nx, c1 = 0;
    for (const auto& [r, c] : m.cells) {
        r0 = std::min(r0, r);
        r1 = std::max(r1, r);
        c0 = std::min(c0, c);
        c1 = std::max(c1, c);
    }
    const double bw = static_cast<double>(c1 - c0 + 1);
    const double bh = static_cast<double>(r1 - r0 + 1);
    const double diam_cells = std::hypot(bw, bh);
    const double radius_cells = 4.0 * diam_cells;

    // midpoint weights per offset (cell units; the overall h^{-2s} and
    // C_{2,s} factors are applied once at the end)
    const long reach = static_cast<long>(std::floor(radius_cells));
    const double r2max = radius_cells * radius_cells;
    double far_sum = 0.0;
    for (long dr = -reach; dr <= reach; ++dr) {
        for (long dc = -reach; dc <= reach; ++dc) {
            if (std::labs(dr) <= 1 && std::labs(dc) <= 1) continue;
            const double rr = static_cast<double>(dr * dr + dc * dc);
            if (rr > r2max) continue;
            far_sum += std::pow(rr, -1.0 - s);
        }
    }

    // 3x3 local correction: the kernel moment over the block, spread onto
    // the 4 edge neighbors through the 5-point Laplacian (exact for
    // quadratics on the block)
    const double near_weight =
        std::pow(1.5, 2.0 - 2.0 * s) * detail::unit_square_moment(s) / 4.0;

    // analytic tail beyond the truncation radius (u = 0 there)
    const double tail_weight = std::numbers::pi / s * std::pow(radius_cells, -2.0 * s);

    const double prefactor = fraclap_constant(2, s) * std::pow(mask.h, -2.0 * s);
    const double diag = prefactor * (4.0 * near_weight + far_sum + tail_weight);

    m.entries = DenseMatrix(n);
    parallel_for(0, n, [&](std::size_t i) {
        const auto [ri, ci] = m.cells[i];
        m.entries.at(i, i) = diag;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const auto [rj, cj] = m.cells[j];
            const long dr = static_cast<long>(rj) - static_cast<long>(ri);
            const long dc = static_cast<long>(cj) - static_cast<long>(ci);
            if (std::labs(dr) <= 1 && std::labs(dc) <= 1) {
                if (dr == 0 || dc == 0) m.entries.at(i, j) = -prefactor * near_weight;
                continue;  // corner neighbors carry no weight of their own
            }
            const double rr = static_cast<double>(dr * dr + dc * dc);
            if (rr > r2max) continue;
            m.entries.at(i, j) = -prefactor * std::pow(rr, -1.0 - s);
        }
    });

    // symmetrize (exact up to roundoff already)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 0.5 * (m.entries.at(i, j) + m.entries.at(j, i));
            m.entries.at(i, j) = v;
            m.entries.at(j, i) = v;
        }
    return m;
}

/// Smallest eigenvalue and ground state of a FracLapMatrix: inverse power
/// iteration on the Cholesky factorization. phi is normalized to unit
/// discrete L2 norm (cell measure h^dim) and sign-fixed nonnegative.
struct Lambda1Result {
    double lambda = 0.0;
    std::vector<double> phi;
};

inline Lambda1Result lambda1(const FracLapMatrix& m) {
    SmallestEigenpair pair;
    try {
        pair = inverse_power_iteration(m.entries, 1e-10);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(std::string("lambda1: ") + e.what());
    }
    double mean = 0.0;
    for (double v : pair.vector) mean += v;
    if (mean < 0.0)
        for (double& v : pair.vector) v = -v;
    const double cell = std::pow(m.h, static_cast<double>(m.dimension));
    double norm2 = 0.0;
    for (double v : pair.vector) norm2 += v * v;
    const double scale = 1.0 / std::sqrt(cell * norm2);
    for (double& v : pair.vector) v *= scale;
    return {pair.value, std::move(pair.vector)};
}

/// Embed a coefficient vector over the mask cells back onto the 2D grid
/// (zero outside the mask).
inline GridFn2D embed_on_mask(const FracLapMatrix& m, const std::vector<double>& coeffs) {
    if (m.dimension != 2) throw std::invalid_argument("embed_on_mask: 2D matrices only");
    if (coeffs.size() != m.size) throw std::invalid_argument("embed_on_mask: size mismatch");
    GridFn2D f;
    f.h = m.h;
    f.origin = m.origin;
    f.nx = m.mask_nx;
    f.ny = m.mask_ny;
    f.values.assign(f.nx * f.ny, 0.0);
    for (std::size_t i = 0; i < m.size; ++i)
        f.at(m.cells[i].first, m.cells[i].second) = coeffs[i];
    return f;
}

/// Rayleigh quotient v^T A v / v^T v of the discrete operator.
inline double rayleigh_quotient(const FracLapMatrix& m, const std::vector<double>& v) {
    if (v.size() != m.size) throw std::invalid_argument("rayleigh_quotient: size mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m.size; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.size; ++j) s += m.entries.at(i, j) * v[j];
        num += v[i] * s;
        den += v[i] * v[i];
    }
    if (den == 0.0) throw std::invalid_argument("rayleigh_quotient: zero vector");
    return num / den;
}

/// Mask text format: a header line `h=<real>` followed by one row of 0/1
/// characters per grid row. Shared by the CLI and the rearrangement tools.
inline DomainMask2D read_mask(std::istream& in, const std::string& source = "<stream>") {
    std::string line;
    if (!std::getline(in, line) || line.rfind("h=", 0) != 0)
        throw io_error(source + ": expected header line h=<real>");
    DomainMask2D m;
    try {
        m.h = std::stod(line.substr(2));
    } catch (...) {
        throw io_error(source + ": bad cell width in header");
    }
    if (!(m.h > 0.0)) throw io_error(source + ": cell width must be positive");
    std::vector<std::string> rows;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        rows.push_back(line);
    }
    if (rows.empty()) throw io_error(source + ": no grid rows");
    m.ny = rows.size();
    m.nx = rows.front().size();
    m.cells.assign(m.nx * m.ny, 0);
    for (std::size_t r = 0; r < m.ny; ++r) {
        if (rows[r].size() != m.nx)
            throw io_error(source + ": rows must have equal length");
        for (std::size_t c = 0; c < m.nx; ++c) {
            if (rows[r][c] == '1')
                m.set(r, c, true);
            else if (rows[r][c] != '0')
                throw io_error(source + ": grid characters must be 0 or 1");
        }
    }
    if (m.cell_count() == 0) throw io_error(source + ": mask is empty");
    return m;
}

inline DomainMask2D read_mask_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error(path + ": cannot open mask file");
    return read_mask(in, path);
}

inline void write_mask(std::ostream& out, const DomainMask2D& m) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "h=%.17g\n", m.h);
    out << buf;
    for (std::size_t r = 0; r < m.ny; ++r) {
        for (std::size_t c = 0; c < m.nx; ++c) out << (m.at(r, c) ? '1' : '0');
        out << '\n';
    }
}

inline void write_mask_file(const std::string& path, const DomainMask2D& m) {
    std::ofstream out(path);
    if (!out) throw io_error(path + ": cannot open for writing");
    write_mask(out, m);
}

}  // namespace fracspec
