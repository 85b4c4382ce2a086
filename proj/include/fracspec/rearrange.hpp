#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fracspec/grid.hpp"

namespace fracspec {

namespace detail {

// Cell visit order for centered set constructions: all cells of an
// odd-sided square canvas ranked by an integer key pair (primary shape
// metric, secondary rounding metric) from the center cell, remaining ties
// broken lexicographically by (row, col). Integer keys make ties exact and
// the order fully deterministic.
template <class Metric>
std::vector<std::pair<std::size_t, std::size_t>> ranked_cells(std::size_t side, Metric&& metric) {
    const long mid = static_cast<long>(side / 2);
    struct Entry {
        std::pair<long, long> key;
        std::size_t r, c;
    };
    std::vector<Entry> entries;
    entries.reserve(side * side);
    for (std::size_t r = 0; r < side; ++r)
        for (std::size_t c = 0; c < side; ++c) {
            const long dr = static_cast<long>(r) - mid;
            const long dc = static_cast<long>(c) - mid;
            entries.push_back({metric(dr, dc), r, c});
        }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.key != b.key) return a.key < b.key;
        if (a.r != b.r) return a.r < b.r;
        return a.c < b.c;
    });
    std::vector<std::pair<std::size_t, std::size_t>> order;
    order.reserve(entries.size());
    for (const auto& e : entries) order.emplace_back(e.r, e.c);
    return order;
}

// shared ordering of the disk constructions (and schwarz_set_2d, whose
// tie-break is plain lexicographic by construction: the primary key is
// already the squared distance)
inline std::pair<long, long> disk_key(long dr, long dc) {
    return {dr * dr + dc * dc, 0};
}

inline std::size_t canvas_side_for(std::size_t cells, double stretch) {
    const double r = std::sqrt(static_cast<double>(cells) * stretch);
    std::size_t side = 2 * (static_cast<std::size_t>(std::ceil(r)) + 2) + 1;
    return side;
}

template <class Metric>
DomainMask2D fill_by_rank(std::size_t cells, double h, double stretch, Metric&& metric) {
    if (cells == 0) throw std::invalid_argument("shape builder: need at least one cell");
    const std::size_t side = canvas_side_for(cells, stretch);
    const auto order = ranked_cells(side, metric);
    if (order.size() < cells) throw std::invalid_argument("shape builder: canvas too small");
    DomainMask2D m = DomainMask2D::empty_canvas(side, side, h);
    for (std::size_t i = 0; i < cells; ++i) m.set(order[i].first, order[i].second, true);
    return m.cropped();
}

}  // namespace detail

/// Symmetric-decreasing rearrangement on a uniform grid: values are sorted
/// so the largest sits at the node nearest the interval midpoint,
/// alternating outward with ties toward the left. A permutation of the
/// input values, so equimeasurable and L2-preserving exactly.
inline GridFn1D rearrange_1d(const GridFn1D& f) {
    f.validate();
    for (double v : f.values)
        if (v < 0.0) throw std::domain_error("rearrange_1d: values must be nonnegative");
    const std::size_t n = f.size();
    const double h0 = f.grid.nodes[1] - f.grid.nodes[0];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h = f.grid.nodes[i + 1] - f.grid.nodes[i];
        if (std::abs(h - h0) > 1e-12 * std::abs(h0))
            throw std::invalid_argument("rearrange_1d: grid must be uniform");
    }

    // distance from the midpoint in half-step units: |2i - (n-1)| is exact
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [n](std::size_t i, std::size_t j) {
        const long di = std::labs(2 * static_cast<long>(i) - static_cast<long>(n - 1));
        const long dj = std::labs(2 * static_cast<long>(j) - static_cast<long>(n - 1));
        if (di != dj) return di < dj;
        return i < j;
    });

    std::vector<double> sorted = f.values;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    std::vector<double> out(n);
    for (std::size_t r = 0; r < n; ++r) out[order[r]] = sorted[r];
    return GridFn1D(f.grid, std::move(out));
}

/// Disk-shaped mask with the same cell count as the input (the set-level
/// Schwarz rearrangement at cell resolution): cells chosen by ascending
/// distance from the canvas center, ties lexicographic.
inline DomainMask2D schwarz_set_2d(const DomainMask2D& mask) {
    mask.validate();
    return detail::fill_by_rank(mask.cell_count(), mask.h, 4.0 / std::numbers::pi,
                                detail::disk_key);
}

/// Builtin cross-sections of a given cell count: quasi-disk, square rings,
/// and aspect:1 rectangle rings. Square and rectangle rings complete
/// roundest-first so partial rings spread over all sides.
inline DomainMask2D make_disk_mask(std::size_t cells, double h) {
    return detail::fill_by_rank(cells, h, 4.0 / std::numbers::pi, detail::disk_key);
}

inline DomainMask2D make_square_mask(std::size_t cells, double h) {
    return detail::fill_by_rank(cells, h, 1.0, [](long dr, long dc) {
        return std::pair<long, long>{std::max(std::labs(dr), std::labs(dc)),
                                     dr * dr + dc * dc};
    });
}

inline DomainMask2D make_rect_mask(std::size_t cells, long aspect, double h) {
    if (aspect < 1) throw std::invalid_argument("make_rect_mask: aspect must be >= 1");
    return detail::fill_by_rank(cells, h, static_cast<double>(aspect),
                                [aspect](long dr, long dc) {
                                    return std::pair<long, long>{
                                        std::max(std::labs(dc), aspect * std::labs(dr)),
                                        dr * dr + dc * dc};
                                });
}

/// Steiner symmetrization at cell resolution: each slice perpendicular to
/// the chosen axis is replaced by a centered run of the same cell count
/// (axis 1 centers runs along x within each row, axis 2 along y within
/// each column). Parity leftovers round toward the low side.
inline DomainMask2D steiner_2d(const DomainMask2D& mask, int axis) {
    mask.validate();
    if (axis != 1 && axis != 2) throw std::invalid_argument("steiner_2d: axis must be 1 or 2");
    DomainMask2D out = DomainMask2D::empty_canvas(mask.ny, mask.nx, mask.h);
    out.origin = mask.origin;
    if (axis == 1) {
        for (std::size_t r = 0; r < mask.ny; ++r) {
            std::size_t count = 0;
            for (std::size_t c = 0; c < mask.nx; ++c) count += mask.at(r, c);
            const std::size_t start = (mask.nx - count) / 2;
            for (std::size_t c = start; c < start + count; ++c) out.set(r, c, true);
        }
    } else {
        for (std::size_t c = 0; c < mask.nx; ++c) {
            std::size_t count = 0;
            for (std::size_t r = 0; r < mask.ny; ++r) count += mask.at(r, c);
            const std::size_t start = (mask.ny - count) / 2;
            for (std::size_t r = start; r < start + count; ++r) out.set(r, c, true);
        }
    }
    return out;
}

/// Superlevel-set decomposition of a nonnegative grid function. Thresholds
/// sit at the midpoints of `levels` equal slabs of (0, max]; the
/// reconstruction sum of slab thicknesses then matches f within
/// range/levels in the sup norm.
struct LevelSetDecomposition {
    std::vector<double> thresholds;   // ascending
    std::vector<DomainMask2D> masks;  // superlevel sets, nested decreasing
    double thickness = 0.0;           // slab height used by reconstruct()
};

inline LevelSetDecomposition layer_cake(const GridFn2D& f, std::size_t levels) {
    f.validate();
    if (levels < 2) throw std::invalid_argument("layer_cake: need at least 2 levels");
    double fmax = 0.0;
    for (double v : f.values) {
        if (v < 0.0) throw std::domain_error("layer_cake: values must be nonnegative");
        fmax = std::max(fmax, v);
    }
    LevelSetDecomposition out;
    if (fmax == 0.0) {
        DomainMask2D m = DomainMask2D::empty_canvas(f.ny, f.nx, f.h);
        m.origin = f.origin;
        out.thresholds = {0.0};
        out.masks.push_back(std::move(m));
        out.thickness = 0.0;
        return out;
    }
    out.thickness = fmax / static_cast<double>(levels);
    for (std::size_t k = 1; k <= levels; ++k) {
        const double t = fmax * (2.0 * static_cast<double>(k) - 1.0) /
                         (2.0 * static_cast<double>(levels));
        DomainMask2D m = DomainMask2D::empty_canvas(f.ny, f.nx, f.h);
        m.origin = f.origin;
        for (std::size_t i = 0; i < f.values.size(); ++i) m.cells[i] = f.values[i] > t ? 1 : 0;
        out.thresholds.push_back(t);
        out.masks.push_back(std::move(m));
    }
    return out;
}

/// Staircase reconstruction from a layer-cake decomposition.
inline GridFn2D reconstruct(const LevelSetDecomposition& d) {
    if (d.masks.empty()) throw std::invalid_argument("reconstruct: empty decomposition");
    GridFn2D f;
    f.h = d.masks.front().h;
    f.origin = d.masks.front().origin;
    f.nx = d.masks.front().nx;
    f.ny = d.masks.front().ny;
    f.values.assign(f.nx * f.ny, 0.0);
    for (const auto& m : d.masks)
        for (std::size_t i = 0; i < m.cells.size(); ++i)
            if (m.cells[i]) f.values[i] += d.thickness;
    return f;
}

/// Function-level Schwarz rearrangement at cell resolution: quantize by
/// layer_cake, replace every superlevel set by its centered disk (shared
/// ranking, so the rearranged sets stay nested), and restack. The result is
/// a permutation of the quantized input values.
inline GridFn2D schwarz_fn_2d(const GridFn2D& f, std::size_t levels) {
    const LevelSetDecomposition d = layer_cake(f, levels);
    std::size_t largest = 0;
    for (const auto& m : d.masks) largest = std::max(largest, m.cell_count());
    const std::size_t side =
        std::max<std::size_t>(detail::canvas_side_for(std::max<std::size_t>(largest, 1),
                                                      4.0 / std::numbers::pi),
                              3);
    const auto order = detail::ranked_cells(side, detail::disk_key);

    GridFn2D out;
    out.h = f.h;
    out.origin = {0.0, 0.0};
    out.nx = side;
    out.ny = side;
    out.values.assign(side * side, 0.0);
    for (const auto& m : d.masks) {
        const std::size_t count = m.cell_count();
        for (std::size_t i = 0; i < count; ++i)
            out.at(order[i].first, order[i].second) += d.thickness;
    }
    return out;
}

}  // namespace fracspec
