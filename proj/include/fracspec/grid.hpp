#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fracspec {

/// Nodes of a 1D mesh on [a,b]. Nodes are strictly increasing and include
/// both endpoints; meshes may be graded toward the endpoints.
struct Grid1D {
    double a = 0.0;
    double b = 1.0;
    std::vector<double> nodes;

    std::size_t size() const { return nodes.size(); }

    void validate() const {
        if (nodes.size() < 3) throw std::invalid_argument("Grid1D: need at least 3 nodes");
        if (!(a < b)) throw std::invalid_argument("Grid1D: require a < b");
        if (nodes.front() != a || nodes.back() != b)
            throw std::invalid_argument("Grid1D: nodes must span [a,b] exactly");
        for (std::size_t i = 1; i < nodes.size(); ++i)
            if (!(nodes[i] > nodes[i - 1]))
                throw std::invalid_argument("Grid1D: nodes must be strictly increasing");
    }

    static Grid1D uniform(double a, double b, std::size_t n) {
        if (n < 3) throw std::invalid_argument("Grid1D: need at least 3 nodes");
        if (!(a < b)) throw std::invalid_argument("Grid1D: require a < b");
        Grid1D g;
        g.a = a;
        g.b = b;
        g.nodes.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            g.nodes[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
        g.nodes.front() = a;
        g.nodes.back() = b;
        return g;
    }

    /// Two-sided graded mesh: nodes cluster at both endpoints like xi^r.
    /// r = 1 reproduces the uniform mesh.
    static Grid1D graded(double a, double b, std::size_t n, double r) {
        if (n < 3) throw std::invalid_argument("Grid1D: need at least 3 nodes");
        if (!(a < b)) throw std::invalid_argument("Grid1D: require a < b");
        if (!(r >= 1.0)) throw std::invalid_argument("Grid1D: grading exponent must be >= 1");
        Grid1D g;
        g.a = a;
        g.b = b;
        g.nodes.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double xi = static_cast<double>(i) / static_cast<double>(n - 1);
            const double p = std::pow(xi, r);
            const double q = std::pow(1.0 - xi, r);
            g.nodes[i] = a + (b - a) * (p / (p + q));
        }
        g.nodes.front() = a;
        g.nodes.back() = b;
        return g;
    }
};

/// Trapezoid quadrature weights for a (possibly non-uniform) grid.
/// They are positive and sum to b - a up to roundoff.
inline std::vector<double> trapezoid_weights(const Grid1D& g) {
    g.validate();
    const std::size_t n = g.size();
    std::vector<double> w(n);
    w[0] = 0.5 * (g.nodes[1] - g.nodes[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) w[i] = 0.5 * (g.nodes[i + 1] - g.nodes[i - 1]);
    w[n - 1] = 0.5 * (g.nodes[n - 1] - g.nodes[n - 2]);
    return w;
}

/// Function samples on a Grid1D, one value per node.
struct GridFn1D {
    Grid1D grid;
    std::vector<double> values;

    GridFn1D() = default;
    GridFn1D(Grid1D g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
        validate();
    }

    template <class F>
    static GridFn1D sample(const Grid1D& g, F&& f) {
        std::vector<double> v(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.nodes[i]);
        return GridFn1D(g, std::move(v));
    }

    std::size_t size() const { return values.size(); }

    void validate() const {
        grid.validate();
        if (values.size() != grid.size())
            throw std::invalid_argument("GridFn1D: values/node count mismatch");
    }
};

/// Function samples at the cell centers of a uniform 2D grid.
/// Cell (row i, col j) has center origin + ((j+1/2)h, (i+1/2)h).
struct GridFn2D {
    double h = 1.0;
    std::pair<double, double> origin{0.0, 0.0};
    std::size_t nx = 0;  // columns
    std::size_t ny = 0;  // rows
    std::vector<double> values;  // row-major, ny*nx

    double& at(std::size_t row, std::size_t col) { return values[row * nx + col]; }
    double at(std::size_t row, std::size_t col) const { return values[row * nx + col]; }

    void validate() const {
        if (!(h > 0.0)) throw std::invalid_argument("GridFn2D: cell width must be positive");
        if (values.size() != nx * ny || nx == 0 || ny == 0)
            throw std::invalid_argument("GridFn2D: dimension/value mismatch");
    }
};

/// Cell-indicator description of a planar domain: true cells lie in Omega,
/// everything else is exterior (where Dirichlet data is zero).
struct DomainMask2D {
    double h = 1.0;
    std::pair<double, double> origin{0.0, 0.0};
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<std::uint8_t> cells;  // row-major, 1 = in Omega

    bool at(std::size_t row, std::size_t col) const { return cells[row * nx + col] != 0; }
    void set(std::size_t row, std::size_t col, bool v) { cells[row * nx + col] = v ? 1 : 0; }

    std::size_t cell_count() const {
        std::size_t c = 0;
        for (auto v : cells) c += (v != 0);
        return c;
    }

    void validate() const {
        if (!(h > 0.0)) throw std::invalid_argument("DomainMask2D: cell width must be positive");
        if (cells.size() != nx * ny || nx == 0 || ny == 0)
            throw std::invalid_argument("DomainMask2D: dimension/cell mismatch");
        if (cell_count() == 0) throw std::invalid_argument("DomainMask2D: mask is empty");
    }

    static DomainMask2D empty_canvas(std::size_t ny, std::size_t nx, double h) {
        DomainMask2D m;
        m.h = h;
        m.nx = nx;
        m.ny = ny;
        m.cells.assign(nx * ny, 0);
        return m;
    }

    /// Crop to the bounding box of true cells, shifting the origin so cell
    /// centers keep their physical coordinates.
    DomainMask2D cropped() const {
        validate();
        std::size_t r0 = ny, r1 = 0, c0 = nx, c1 = 0;
        for (std::size_t r = 0; r < ny; ++r)
            for (std::size_t c = 0; c < nx; ++c)
                if (at(r, c)) {
                    r0 = std::min(r0, r);
                    r1 = std::max(r1, r);
                    c0 = std::min(c0, c);
                    c1 = std::max(c1, c);
                }
        DomainMask2D out = empty_canvas(r1 - r0 + 1, c1 - c0 + 1, h);
        out.origin = {origin.first + static_cast<double>(c0) * h,
                      origin.second + static_cast<double>(r0) * h};
        for (std::size_t r = r0; r <= r1; ++r)
            for (std::size_t c = c0; c <= c1; ++c) out.set(r - r0, c - c0, at(r, c));
        return out;
    }
};

}  // namespace fracspec
