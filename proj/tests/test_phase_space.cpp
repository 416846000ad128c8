#include <doctest.h>

#include <cmath>

#include "rfsqueeze/errors.hpp"
#include "rfsqueeze/liouvillian.hpp"
#include "rfsqueeze/phase_space.hpp"
#include "rfsqueeze/quadrature.hpp"
#include "oracles.hpp"

using namespace rfs;

namespace {

SystemParams params_s(double s) { return SystemParams::from_saturation(s, 1.0); }

FieldModeState field_at(double s) {
    return field_state_from_atom(steady_state(build_liouvillian(params_s(s))));
}

}  // namespace

TEST_CASE("vacuum maps from the undriven atom") {
    const auto f = field_at(0.0);
    CHECK(f.p0 == doctest::Approx(1.0));
    CHECK(std::abs(f.coh) < 1e-12);
}

TEST_CASE("high power limit is a balanced mixture with no coherence") {
    const auto f = field_at(1e8);
    CHECK(f.p0 == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(f.p1 == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(std::abs(f.coh) < 1e-3);
}

TEST_CASE("field state at the paper's intermediate power") {
    const auto f = field_at(0.36);
    CHECK(f.p1 == doctest::Approx(0.36 / 2.72).epsilon(1e-10));
    CHECK(std::norm(f.coh) == doctest::Approx(0.18 / 1.8496).epsilon(1e-10));
}

TEST_CASE("invariant-violating field states are rejected") {
    CHECK_THROWS_AS((FieldModeState{0.6, 0.6, 0.0}.validate()), invalid_input);
    CHECK_THROWS_AS((FieldModeState{0.5, 0.5, complexd(0.6, 0.0)}.validate()), invalid_input);
    DensityMatrix2 bad;
    bad.rho_gg = 0.2;
    bad.rho_ee = 0.2;
    CHECK_THROWS_AS(field_state_from_atom(bad), invalid_input);
}

TEST_CASE("vacuum Wigner function: peak 2/pi, isotropic, normalized") {
    const auto grid = wigner(FieldModeState{1.0, 0.0, 0.0});
    CHECK(grid.max_value() == doctest::Approx(2.0 / M_PI).epsilon(1e-12));
    CHECK(grid.at(64, 64) == doctest::Approx(2.0 / M_PI));  // origin of the 129-point grid
    CHECK(grid.integral() == doctest::Approx(1.0).epsilon(1e-9));
    const auto m1 = grid.marginal_moments(0);
    const auto m2 = grid.marginal_moments(1);
    CHECK(m1[1] == doctest::Approx(0.25).epsilon(1e-9));
    CHECK(m2[1] == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("equal mixture has a zero at the origin") {
    const auto grid = wigner(FieldModeState{0.5, 0.5, 0.0});
    CHECK(std::abs(grid.at(64, 64)) < 1e-9);
    CHECK(grid.integral() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("marginal variances match the quadrature module across powers") {
    for (double s : {0.0, 0.1, 0.36, 10.0}) {
        const auto f = field_at(s).dipole_aligned();
        const auto grid = wigner(f);
        CHECK(grid.integral() == doctest::Approx(1.0).epsilon(1e-6));
        const double n0 = normally_ordered_variance(params_s(s), 0.0).normally_ordered_variance;
        const double n90 =
            normally_ordered_variance(params_s(s), M_PI / 2).normally_ordered_variance;
        CHECK(grid.marginal_moments(0)[1] == doctest::Approx(0.25 + n0).epsilon(1e-6));
        CHECK(grid.marginal_moments(1)[1] == doctest::Approx(0.25 + n90).epsilon(1e-6));
    }
}

TEST_CASE("squeezed state is narrower along x1 than vacuum") {
    const auto grid = wigner(field_at(0.36).dipole_aligned());
    CHECK(grid.marginal_moments(0)[1] < 0.25);
    CHECK(grid.marginal_moments(1)[1] > 0.25);
}

TEST_CASE("rotation covariance of the Wigner function") {
    const auto f = field_at(0.36).dipole_aligned();
    const double theta = 0.7;
    const auto base = wigner(f);
    const auto rot = wigner(f.rotated(theta));
    // W_rot(alpha) = W(alpha e^{i theta}): compare on a ring of sample points
    const double r = 0.5;
    for (int k = 0; k < 8; ++k) {
        const double psi = 2.0 * M_PI * k / 8;
        const complexd alpha = r * std::exp(complexd(0.0, psi));
        const complexd alpha_rot = alpha * std::exp(complexd(0.0, theta));
        // evaluate by nearest-grid sampling with bilinear interpolation
        const auto sample = [](const WignerGrid& g, complexd a) {
            const double step = g.x1_axis[1] - g.x1_axis[0];
            const double fx = (a.real() - g.x1_axis.front()) / step;
            const double fy = (a.imag() - g.x2_axis.front()) / step;
            const int ix = static_cast<int>(fx), iy = static_cast<int>(fy);
            const double tx = fx - ix, ty = fy - iy;
            return (1 - tx) * (1 - ty) * g.at(ix, iy) + tx * (1 - ty) * g.at(ix + 1, iy) +
                   (1 - tx) * ty * g.at(ix, iy + 1) + tx * ty * g.at(ix + 1, iy + 1);
        };
        CHECK(sample(rot, alpha) == doctest::Approx(sample(base, alpha_rot)).epsilon(2e-3));
    }
}

TEST_CASE("Wigner values are real by construction and the grid spec is checked") {
    CHECK_THROWS_AS(wigner(FieldModeState{1.0, 0.0, 0.0}, WignerGridSpec{4.0, 1}),
                    invalid_input);
    // a grid too small to normalize reports the defect
    CHECK_THROWS_AS(wigner(FieldModeState{1.0, 0.0, 0.0}, WignerGridSpec{0.5, 32}),
                    accuracy_error);
}

TEST_CASE("vacuum half-max contour is a circle of radius sqrt(ln 2 / 2)") {
    const auto grid = wigner(FieldModeState{1.0, 0.0, 0.0});
    const auto loops = half_max_contour(grid);
    REQUIRE(loops.size() == 1);
    const double target = std::sqrt(0.5 * std::log(2.0));
    const double step = grid.x1_axis[1] - grid.x1_axis[0];
    for (const auto& pt : loops[0]) {
        const double r = std::hypot(pt[0], pt[1]);
        CHECK(std::abs(r - target) < step);
    }
    // closed loop
    CHECK(loops[0].front()[0] == doctest::Approx(loops[0].back()[0]));
    CHECK(loops[0].front()[1] == doctest::Approx(loops[0].back()[1]));
}

TEST_CASE("squeezed contour extends less along x1 than x2") {
    const auto grid = wigner(field_at(0.36).dipole_aligned());
    const auto loops = half_max_contour(grid);
    REQUIRE(!loops.empty());
    double max_x1 = 0.0, max_x2 = 0.0;
    for (const auto& loop : loops)
        for (const auto& pt : loop) {
            max_x1 = std::max(max_x1, std::abs(pt[0] - 0.0));
            max_x2 = std::max(max_x2, std::abs(pt[1]));
        }
    // the contour ring is offset along x1 by the coherent amplitude; compare
    // half-extents about the center instead
    double c1 = 0.0;
    std::size_t n = 0;
    for (const auto& loop : loops)
        for (const auto& pt : loop) {
            c1 += pt[0];
            ++n;
        }
    c1 /= static_cast<double>(n);
    double ext1 = 0.0, ext2 = 0.0;
    for (const auto& loop : loops)
        for (const auto& pt : loop) {
            ext1 = std::max(ext1, std::abs(pt[0] - c1));
            ext2 = std::max(ext2, std::abs(pt[1]));
        }
    CHECK(ext1 < ext2);
}

TEST_CASE("coherence-free contours are isotropic") {
    const auto grid = wigner(FieldModeState{0.8, 0.2, 0.0});
    const auto loops = half_max_contour(grid);
    REQUIRE(!loops.empty());
    for (const auto& loop : loops) {
        double rmin = 1e9, rmax = 0.0;
        for (const auto& pt : loop) {
            const double r = std::hypot(pt[0], pt[1]);
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
        }
        CHECK(rmax - rmin < 2.0 * (grid.x1_axis[1] - grid.x1_axis[0]));
    }
}

TEST_CASE("balanced mixture yields an annulus: two closed contours") {
    const auto grid = wigner(FieldModeState{0.5, 0.5, 0.0});
    const auto loops = half_max_contour(grid);
    CHECK(loops.size() == 2);
}
