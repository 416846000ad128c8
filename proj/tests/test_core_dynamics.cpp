#include <doctest.h>

#include <cmath>

#include "rfsqueeze/errors.hpp"
#include "rfsqueeze/liouvillian.hpp"
#include "rfsqueeze/rng.hpp"
#include "oracles.hpp"

using namespace rfs;

namespace {

SystemParams params_s(double s, double detuning = 0.0, double dephasing = 0.0) {
    return SystemParams::from_saturation(s, 1.0, detuning, dephasing);
}

DensityMatrix2 random_state(Rng& rng) {
    // Random Bloch vector inside the unit ball.
    while (true) {
        const double x = 2.0 * rng.uniform01() - 1.0;
        const double y = 2.0 * rng.uniform01() - 1.0;
        const double z = 2.0 * rng.uniform01() - 1.0;
        if (x * x + y * y + z * z > 1.0) continue;
        DensityMatrix2 rho;
        rho.rho_ee = 0.5 * (1.0 + z);
        rho.rho_gg = 0.5 * (1.0 - z);
        rho.rho_ge = 0.5 * complexd(x, -y);
        return rho;
    }
}

}  // namespace

TEST_CASE("undriven system decays to the ground state") {
    const auto L = build_liouvillian(params_s(0.0));
    const auto ss = steady_state(L);
    CHECK(ss.rho_ee == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(std::abs(ss.rho_ge) < 1e-12);
    CHECK(ss.rho_gg == doctest::Approx(1.0));
}

TEST_CASE("vectorized identity is a left null vector of the generator") {
    Rng rng(42);
    for (int i = 0; i < 25; ++i) {
        SystemParams p;
        p.gamma = 0.1 + 3.0 * rng.uniform01();
        p.rabi = 3.0 * rng.uniform01();
        p.detuning = 4.0 * (rng.uniform01() - 0.5);
        p.dephasing = rng.uniform01();
        const auto L = build_liouvillian(p);
        Eigen::RowVector4cd tr_row;
        tr_row << 1.0, 0.0, 0.0, 1.0;
        CHECK((tr_row * L.generator).norm() < 1e-12 * L.generator.norm());
    }
}

TEST_CASE("rejects non-finite parameters") {
    SystemParams p;
    p.gamma = std::nan("");
    CHECK_THROWS_AS(build_liouvillian(p), invalid_input);
    p = SystemParams{};
    p.rabi = -1.0;
    CHECK_THROWS_AS(build_liouvillian(p), invalid_input);
}

TEST_CASE("propagation matches brute-force RK4 integration from |e><e|") {
    const SystemParams p{1.0, 1.0, 0.0, 0.0};
    const auto L = build_liouvillian(p);
    const Propagator prop(L);
    for (double tau : {0.3, 1.0, 2.5, 7.0}) {
        const auto rho = prop.propagate(DensityMatrix2::excited(), tau);
        const auto ref = oracle::rk4_evolve(p, {0.0, 0.0, 0.0, 1.0}, tau);
        CHECK(rho.rho_ee == doctest::Approx(ref[3].real()).epsilon(1e-9));
        CHECK(std::abs(rho.rho_ge - ref[1]) < 1e-9);
    }
}

TEST_CASE("steady state at s = 1 on resonance has quarter excitation") {
    const auto ss = steady_state(build_liouvillian(params_s(1.0)));
    CHECK(ss.rho_ee == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("steady state matches the analytic saturation law") {
    for (double s : {0.05, 0.1, 1.0 / 3.0, 1.0, 3.0, 100.0}) {
        const auto ss = steady_state(build_liouvillian(params_s(s)));
        CHECK(ss.rho_ee == doctest::Approx(oracle::rho_ee_ss(s)).epsilon(1e-10));
        CHECK(std::norm(ss.sigma_minus_expectation()) ==
              doctest::Approx(oracle::coherence_sq_ss(s)).epsilon(1e-10));
    }
    // spot value from the analytic form
    const auto ss = steady_state(build_liouvillian(params_s(0.1)));
    CHECK(ss.rho_ee == doctest::Approx(0.1 / 2.2).epsilon(1e-12));
}

TEST_CASE("gamma = 0 has no unique steady state") {
    SystemParams p{1.0, 1.0, 0.0, 0.0};
    auto L = build_liouvillian(p);
    L.params.gamma = 0.0;
    CHECK_THROWS_AS(steady_state(L), no_unique_steady_state);
}

TEST_CASE("propagate is the identity at tau = 0 and rejects tau < 0") {
    const auto L = build_liouvillian(params_s(0.5));
    const Propagator prop(L);
    Rng rng(7);
    const auto rho = random_state(rng);
    const auto same = prop.propagate(rho, 0.0);
    CHECK(same.rho_ee == rho.rho_ee);
    CHECK(same.rho_ge == rho.rho_ge);
    CHECK_THROWS_AS(prop.propagate(rho, -1.0), invalid_input);
}

TEST_CASE("long-time propagation reaches the steady state") {
    const auto L = build_liouvillian(params_s(0.7, 0.4));
    const Propagator prop(L);
    const auto ss = steady_state(L);
    const auto rho = prop.propagate(DensityMatrix2::excited(), 60.0);
    CHECK(rho.rho_ee == doctest::Approx(ss.rho_ee).epsilon(1e-10));
    CHECK(std::abs(rho.rho_ge - ss.rho_ge) < 1e-10);
}

TEST_CASE("pure decay from |e><e| is exponential") {
    const SystemParams p{1.0, 0.0, 0.0, 0.0};
    const auto rho = propagate(build_liouvillian(p), DensityMatrix2::excited(), 1.0);
    CHECK(rho.rho_ee == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("rabi_from_saturation convention") {
    CHECK(rabi_from_saturation(0.0, 1.0) == 0.0);
    CHECK(rabi_from_saturation(2.0, 1.0) == doctest::Approx(1.0));
    CHECK(rabi_from_saturation(1.0 / 3.0, 1.0) == doctest::Approx(std::sqrt(1.0 / 6.0)));
    CHECK_THROWS_AS(rabi_from_saturation(-0.1, 1.0), invalid_input);

    // round trip and the induced steady population
    const auto p = params_s(1.0 / 3.0);
    CHECK(p.saturation() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(steady_state(build_liouvillian(p)).rho_ee == doctest::Approx(0.125).epsilon(1e-10));
}

TEST_CASE("trace and positivity are preserved for random states and parameters") {
    Rng rng(123);
    for (int i = 0; i < 40; ++i) {
        SystemParams p;
        p.gamma = 0.2 + 2.0 * rng.uniform01();
        p.rabi = 3.0 * rng.uniform01();
        p.detuning = 3.0 * (rng.uniform01() - 0.5);
        p.dephasing = 0.5 * rng.uniform01();
        const Propagator prop(build_liouvillian(p));
        const auto rho0 = random_state(rng);
        const auto rho = prop.propagate(rho0, 8.0 * rng.uniform01());
        CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
        CHECK(rho.min_eigenvalue() > -1e-12);
    }
}

TEST_CASE("steady state is a fixed point of the flow") {
    const auto L = build_liouvillian(params_s(0.4, -0.7, 0.1));
    const Propagator prop(L);
    const auto ss = steady_state(L);
    for (double tau : {0.0, 0.5, 3.0, 20.0, 100.0}) {
        const auto rho = prop.propagate(ss, tau);
        CHECK(std::abs(rho.rho_ee - ss.rho_ee) < 1e-10);
        CHECK(std::abs(rho.rho_ge - ss.rho_ge) < 1e-10);
    }
}

TEST_CASE("steady-state residual is small in generator units") {
    const auto L = build_liouvillian(params_s(2.0, 1.0));
    const auto ss = steady_state(L);
    const Vector4c v = vectorize(ss.matrix());
    CHECK((L.generator * v).norm() < 1e-12 * L.generator.norm());
}

TEST_CASE("lifetime conversion produces the documented rate") {
    const auto p = SystemParams::from_lifetime_ns(0.58, 0.1);
    CHECK(p.gamma == doctest::Approx(1.7241379e9).epsilon(1e-6));
    CHECK(p.saturation() == doctest::Approx(0.1).epsilon(1e-12));
}
