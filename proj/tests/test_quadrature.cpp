#include <doctest.h>

#include <cmath>

#include "rfsqueeze/errors.hpp"
#include "rfsqueeze/quadrature.hpp"
#include "rfsqueeze/rng.hpp"
#include "oracles.hpp"

using namespace rfs;

namespace {

SystemParams params_s(double s, double detuning = 0.0, double dephasing = 0.0) {
    return SystemParams::from_saturation(s, 1.0, detuning, dephasing);
}

std::vector<double> full_period_grid(int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = 2.0 * M_PI * i / n;
    return g;
}

}  // namespace

TEST_CASE("squeezing optimum: -1/32 at s = 1/3") {
    const auto q = normally_ordered_variance(params_s(1.0 / 3.0), 0.0);
    CHECK(q.normally_ordered_variance == doctest::Approx(-0.03125).epsilon(1e-10));
    CHECK(q.percent_below_vacuum() == doctest::Approx(12.5).epsilon(1e-8));
}

TEST_CASE("squeezing vanishes at s = 1") {
    const auto q = normally_ordered_variance(params_s(1.0), 0.0);
    CHECK(std::abs(q.normally_ordered_variance) < 1e-10);
}

TEST_CASE("antisqueezed quadrature at s = 0.1") {
    const auto q = normally_ordered_variance(params_s(0.1), M_PI / 2);
    CHECK(q.normally_ordered_variance == doctest::Approx(1.0 / 44.0).epsilon(1e-10));
}

TEST_CASE("sign structure: squeezing iff 0 < s < 1 on resonance") {
    for (double s : {0.01, 0.1, 0.5, 0.9}) {
        CHECK(normally_ordered_variance(params_s(s), 0.0).normally_ordered_variance < 0.0);
    }
    for (double s : {1.0 + 1e-6, 2.0, 10.0, 300.0}) {
        CHECK(normally_ordered_variance(params_s(s), 0.0).normally_ordered_variance >= 0.0);
    }
}

TEST_CASE("phase scans are symmetric, periodic and match the analytic form") {
    const auto grid = full_period_grid(64);
    const auto scan = variance_phase_scan(params_s(0.1), grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(scan.variance[i] ==
              doctest::Approx(oracle::variance_ss(0.1, grid[i])).epsilon(1e-10));
        // variance(phi) = variance(-phi) via the 2 pi wrap
        const auto mirror = normally_ordered_variance(params_s(0.1), -grid[i]);
        CHECK(scan.variance[i] == doctest::Approx(mirror.normally_ordered_variance));
    }
    const auto wrapped = normally_ordered_variance(params_s(0.1), grid[5] + 2.0 * M_PI);
    CHECK(scan.variance[5] == doctest::Approx(wrapped.normally_ordered_variance));
}

TEST_CASE("coherent reference scan is identically zero") {
    const auto grid = full_period_grid(32);
    const auto scan = variance_phase_scan(params_s(0.7), grid, true);
    for (double v : scan.variance) CHECK(v == 0.0);
}

TEST_CASE("empty grids are rejected") {
    CHECK_THROWS_AS(variance_phase_scan(params_s(0.1), std::vector<double>{}), invalid_input);
    CHECK_THROWS_AS(variance_power_scan(SystemParams{}, std::vector<double>{}), invalid_input);
}

TEST_CASE("negative window is narrow at low power") {
    // solve N(phi) < 0: cos^2(phi) > rho_ee / (2 m^2) = (1 + s) / 2
    const double s = 0.1;
    const double half_width = std::acos(std::sqrt((1.0 + s) / 2.0));
    CHECK(half_width < M_PI / 4);  // under a quarter fringe period
    const auto grid = full_period_grid(720);
    const auto scan = variance_phase_scan(params_s(s), grid);
    const double step = 2.0 * M_PI / 720;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double phi = scan.grid[i];
        if (phi > M_PI) phi -= 2.0 * M_PI;
        const double folded = std::min(std::abs(phi), M_PI - std::abs(phi));
        if (std::abs(folded - half_width) < step) continue;  // boundary cell
        CHECK((scan.variance[i] < 0.0) == (folded < half_width));
    }
    // the window shrinks toward zero as s -> 1
    CHECK(std::acos(std::sqrt(1.9 / 2.0)) < 0.23);
}

TEST_CASE("no negative variance anywhere at s = 3") {
    const auto scan = variance_phase_scan(params_s(3.0), full_period_grid(256));
    double min = 1.0;
    for (double v : scan.variance) min = std::min(min, v);
    CHECK(min > 0.0);
}

TEST_CASE("power scan: minimum location, zero crossing, asymptote") {
    std::vector<double> s_grid;
    for (int i = 0; i < 400; ++i) s_grid.push_back(0.01 * std::pow(30.0 / 0.01, i / 399.0));
    const auto [in_phase, out_of_phase] = variance_power_scan(SystemParams{}, s_grid);

    std::size_t argmin = 0;
    for (std::size_t i = 0; i < s_grid.size(); ++i)
        if (in_phase.variance[i] < in_phase.variance[argmin]) argmin = i;
    CHECK(s_grid[argmin] == doctest::Approx(1.0 / 3.0).epsilon(0.02));
    CHECK(in_phase.variance[argmin] == doctest::Approx(-0.03125).epsilon(1e-4));

    // N(0) at s = 0.1 is 7.44% below vacuum
    const auto q = normally_ordered_variance(params_s(0.1), 0.0);
    CHECK(q.normally_ordered_variance == doctest::Approx(-0.018595).epsilon(1e-4));
    CHECK(q.percent_below_vacuum() == doctest::Approx(7.438).epsilon(1e-3));

    // phi = pi/2 curve is non-negative and approaches 1/4
    for (double v : out_of_phase.variance) CHECK(v >= 0.0);
    const auto tail = normally_ordered_variance(params_s(1e7), M_PI / 2);
    CHECK(tail.normally_ordered_variance == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("dipole phase vs detuning") {
    CHECK(dipole_phase(params_s(0.01, 0.0)) == doctest::Approx(M_PI / 2).epsilon(1e-10));
    CHECK(dipole_phase(params_s(0.01, 0.5)) == doctest::Approx(M_PI / 4).epsilon(1e-10));
    CHECK(dipole_phase(params_s(0.01, 500.0)) == doctest::Approx(0.0).epsilon(1e-2));
    CHECK(dipole_phase(params_s(0.01, -500.0)) == doctest::Approx(M_PI).epsilon(1e-2));
    // independent of drive strength
    CHECK(dipole_phase(params_s(3.0, 0.5)) == doctest::Approx(M_PI / 4).epsilon(1e-10));
    CHECK_THROWS_AS(dipole_phase(params_s(0.0)), undefined_phase);
}

TEST_CASE("heisenberg product: bound, vacuum equality and spot value") {
    CHECK(heisenberg_product(params_s(0.0)) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    CHECK(heisenberg_product(params_s(1.0 / 3.0)) ==
          doctest::Approx(35.0 / 512.0).epsilon(1e-10));
    CHECK(heisenberg_product(params_s(100.0)) > 1.0 / 16.0);

    for (double s : {0.0, 0.05, 0.3, 1.0, 5.0, 100.0})
        for (double d : {-5.0, -1.0, 0.0, 2.0, 5.0})
            for (double gd : {0.0, 0.3, 1.0})
                CHECK(heisenberg_product(params_s(s, d, gd)) >= 1.0 / 16.0 - 1e-12);
}

TEST_CASE("extremal phases are stationary points of the variance") {
    const auto p = params_s(0.4);
    const double h = 1e-6;
    for (double phi0 : {0.0, M_PI / 2}) {
        const double up = normally_ordered_variance(p, phi0 + h).normally_ordered_variance;
        const double dn = normally_ordered_variance(p, phi0 - h).normally_ordered_variance;
        CHECK(std::abs(up - dn) / (2.0 * h) < 1e-8);
    }
}

TEST_CASE("s = 0 gives exactly zero variances") {
    const auto q0 = normally_ordered_variance(params_s(0.0), 0.0);
    const auto q90 = normally_ordered_variance(params_s(0.0), M_PI / 2);
    CHECK(q0.normally_ordered_variance == 0.0);
    CHECK(q90.normally_ordered_variance == 0.0);
}
