#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fracspec/inequalities.hpp"
#include "fracspec/rearrange.hpp"

using namespace fracspec;

namespace {

GridFn1D const_potential(double a, double b, std::size_t n, double value) {
    return GridFn1D::sample(Grid1D::uniform(a, b, n), [value](double) { return value; });
}

}  // namespace

TEST_CASE("lyapunov_check") {
    SECTION("alpha=1 classical bound: q = lambda1 + 4 sits exactly on it") {
        const InequalityReport rep =
            lyapunov_check(const_potential(0.0, 1.0, 1001, 4.0), FracOrder(1.0), 0.0);
        REQUIRE(rep.rhs == Catch::Approx(4.0).margin(1e-8));
        REQUIRE(rep.lhs == Catch::Approx(4.0).margin(1e-12));
        REQUIRE(rep.satisfied);
        REQUIRE(rep.equality);
        REQUIRE(std::fabs(rep.margin) < 1e-9);
    }

    SECTION("zero excess potential cannot support a nontrivial solution") {
        const InequalityReport rep =
            lyapunov_check(const_potential(0.0, 1.0, 101, 0.0), FracOrder(1.0), 0.0);
        REQUIRE(rep.lhs == 0.0);
        REQUIRE_FALSE(rep.satisfied);
    }

    SECTION("satisfied respects the tolerance band around rhs") {
        const double rhs = 1.0 / sup_G_diag(KernelParams(FracOrder(1.0), 0.0, 1.0)).value;
        const InequalityReport close =
            lyapunov_check(const_potential(0.0, 1.0, 101, rhs - 1e-12), FracOrder(1.0), 0.0);
        REQUIRE(close.satisfied);  // within 1e-9 * max(1,|rhs|)
        const InequalityReport below =
            lyapunov_check(const_potential(0.0, 1.0, 101, rhs - 1e-6), FracOrder(1.0), 0.0);
        REQUIRE_FALSE(below.satisfied);
    }

    SECTION("lambda1 must be nonnegative and the grid must be sane") {
        REQUIRE_THROWS_AS(
            lyapunov_check(const_potential(0.0, 1.0, 11, 1.0), FracOrder(0.8), -1.0),
            std::invalid_argument);
    }
}

TEST_CASE("hartman_wintner_check") {
    SECTION("alpha=1 classical equality: q - lambda1 = 6 on (0,1)") {
        const InequalityReport rep =
            hartman_wintner_check(const_potential(0.0, 1.0, 65537, 6.0), FracOrder(1.0), 0.0);
        REQUIRE(rep.rhs == Catch::Approx(1.0).margin(1e-14));
        REQUIRE(std::fabs(rep.lhs - rep.rhs) < 1e-9);
        REQUIRE(rep.satisfied);
        REQUIRE(rep.equality);
    }

    SECTION("potential below lambda1 has vanishing positive part") {
        const InequalityReport rep =
            hartman_wintner_check(const_potential(0.0, 1.0, 101, 0.5), FracOrder(0.75), 2.0);
        REQUIRE(rep.lhs == 0.0);
        REQUIRE_FALSE(rep.satisfied);
    }
}

TEST_CASE("eigenfunction witness: q = mu1 + lambda1 passes both checkers") {
    for (double al : {0.6, 0.75, 0.9, 1.0}) {
        const KernelParams p(FracOrder(al), 0.0, 1.0);
        const double mu1 = eigen_frac1d(p, 128, 1).eigenvalues.at(0);
        for (double lam : {0.0, 1.0, 10.0}) {
            const GridFn1D q = const_potential(0.0, 1.0, 4097, mu1 + lam);
            const InequalityReport rl = lyapunov_check(q, FracOrder(al), lam);
            const InequalityReport rh = hartman_wintner_check(q, FracOrder(al), lam);
            INFO("alpha=" << al << " lambda1=" << lam);
            REQUIRE(rl.margin >= -1e-9);
            REQUIRE(rl.satisfied);
            REQUIRE(rh.margin >= -1e-9);
            REQUIRE(rh.satisfied);
        }
    }
}

TEST_CASE("shift covariance: both checkers depend only on q - lambda1") {
    // dyadic values keep (q + c) - (lambda1 + c) bitwise equal to q - lambda1
    const double base_lambda = 1.5;
    const double excess = 6.25;
    for (double c : {0.0, 0.25, 4.0, 1024.0}) {
        const GridFn1D q0 = const_potential(0.0, 1.0, 257, base_lambda + excess);
        const GridFn1D qc = const_potential(0.0, 1.0, 257, base_lambda + excess + c);
        for (auto* checker : {&lyapunov_check, &hartman_wintner_check}) {
            const InequalityReport r0 = (*checker)(q0, FracOrder(0.75), base_lambda);
            const InequalityReport rc = (*checker)(qc, FracOrder(0.75), base_lambda + c);
            REQUIRE(r0.lhs == rc.lhs);
            REQUIRE(r0.rhs == rc.rhs);
            REQUIRE(r0.margin == rc.margin);
            REQUIRE(r0.satisfied == rc.satisfied);
        }
    }
}

TEST_CASE("cylinder_nu1") {
    SECTION("additivity nu1 = mu1 + lambda1 is exact") {
        DomainMask2D sq = DomainMask2D::empty_canvas(8, 8, 0.125);
        for (auto& c : sq.cells) c = 1;
        const CylinderSpec spec(KernelParams(FracOrder(0.8), 0.0, 1.0), 0.5, sq);
        const CylinderNu1 r = cylinder_nu1(spec, 64);
        REQUIRE(r.nu1 == r.mu1 + r.lambda1);
    }

    SECTION("nu1 decreases when the interval grows, Omega fixed") {
        DomainMask2D sq = DomainMask2D::empty_canvas(8, 8, 0.125);
        for (auto& c : sq.cells) c = 1;
        const CylinderSpec unit(KernelParams(FracOrder(1.0), 0.0, 1.0), 0.5, sq);
        const CylinderSpec wide(KernelParams(FracOrder(1.0), 0.0, 2.0), 0.5, sq);
        const CylinderNu1 ru = cylinder_nu1(unit, 64);
        const CylinderNu1 rw = cylinder_nu1(wide, 64);
        REQUIRE(rw.nu1 < ru.nu1);
        REQUIRE(rw.lambda1 == ru.lambda1);
    }

    SECTION("pinned composition: unit square at h=1/16, s=0.5, alpha=0.75") {
        DomainMask2D sq = DomainMask2D::empty_canvas(16, 16, 1.0 / 16);
        for (auto& c : sq.cells) c = 1;
        const CylinderSpec spec(KernelParams(FracOrder(0.75), 0.0, 1.0), 0.5, sq);
        const CylinderNu1 r = cylinder_nu1(spec, 256);
        // frozen component values: mu1 from the eigen1d mesh ladder,
        // lambda1 from the fraclap solve on this fixed mask
        REQUIRE(r.mu1 == Catch::Approx(4.156455349425).epsilon(1e-9));
        REQUIRE(r.lambda1 == Catch::Approx(3.553455548313).epsilon(1e-8));
        REQUIRE(r.nu1 == Catch::Approx(7.709910897738).epsilon(1e-8));
    }
}

TEST_CASE("rfk_sweep") {
    const KernelParams interval(FracOrder(0.75), 0.0, 1.0);

    SECTION("disk wins among disk, square, 2:1 rectangle") {
        const std::size_t cells = 448;
        const double h = 1.0 / 24;
        const std::vector<std::pair<std::string, DomainMask2D>> shapes = {
            {"disk", make_disk_mask(cells, h)},
            {"square", make_square_mask(cells, h)},
            {"rect2", make_rect_mask(cells, 2, h)},
        };
        const RfkTable table = rfk_sweep(shapes, interval, 0.5, 65);
        REQUIRE(table.minimizer == "disk");
        REQUIRE(table.rows.front().lambda1 < table.rows.back().lambda1);
        for (const auto& row : table.rows) {
            REQUIRE(row.cells == cells);
            REQUIRE(row.nu1 == row.lambda1 + table.mu1);
        }
        // sorted ascending
        for (std::size_t i = 1; i < table.rows.size(); ++i)
            REQUIRE(table.rows[i].nu1 >= table.rows[i - 1].nu1);
    }

    SECTION("square wins among quadrilaterals") {
        const std::size_t cells = 360;
        const double h = 1.0 / 24;
        const std::vector<std::pair<std::string, DomainMask2D>> shapes = {
            {"square", make_square_mask(cells, h)},
            {"rect2", make_rect_mask(cells, 2, h)},
            {"rect4", make_rect_mask(cells, 4, h)},
        };
        const RfkTable table = rfk_sweep(shapes, interval, 0.5, 65);
        REQUIRE(table.minimizer == "square");
    }

    SECTION("lambda1 is nondecreasing in the aspect ratio") {
        const std::size_t cells = 240;
        const double h = 1.0 / 16;
        std::vector<double> lams;
        for (long aspect : {1, 2, 3, 4}) {
            const DomainMask2D mask = aspect == 1 ? make_square_mask(cells, h)
                                                  : make_rect_mask(cells, aspect, h);
            lams.push_back(lambda1(fraclap_matrix_2d(mask, 0.5)).lambda);
        }
        for (std::size_t i = 1; i < lams.size(); ++i) REQUIRE(lams[i] >= lams[i - 1]);
    }

    SECTION("a repeated shape ties deterministically by shape id") {
        const std::vector<std::pair<std::string, DomainMask2D>> shapes = {
            {"b_copy", make_square_mask(100, 0.1)},
            {"a_copy", make_square_mask(100, 0.1)},
        };
        const RfkTable table = rfk_sweep(shapes, interval, 0.5, 65);
        REQUIRE(table.rows[0].lambda1 == table.rows[1].lambda1);
        REQUIRE(table.minimizer == "a_copy");
    }

    SECTION("unequal cell counts are a parameter error") {
        const std::vector<std::pair<std::string, DomainMask2D>> shapes = {
            {"disk", make_disk_mask(100, 0.1)},
            {"square", make_square_mask(99, 0.1)},
        };
        REQUIRE_THROWS_AS(rfk_sweep(shapes, interval, 0.5, 65), std::invalid_argument);
    }
}
