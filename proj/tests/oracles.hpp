#pragma once

// Test-only oracles, independent of the library's propagation path: the
// Bloch equations are integrated with a hand-rolled fixed-step RK4 on the
// four density-matrix components, and closed forms are evaluated directly.

#include <array>
#include <cmath>
#include <complex>

#include "rfsqueeze/system_params.hpp"

namespace oracle {

using complexd = std::complex<double>;
using State = std::array<complexd, 4>;  // (gg, ge, eg, ee)

// d rho / dt from the optical Bloch equations, written out by hand.
inline State bloch_rhs(const rfs::SystemParams& p, const State& r) {
    const complexd i_unit(0.0, 1.0);
    const complexd half_rabi(0.5 * p.rabi, 0.0);
    const double gperp = 0.5 * p.gamma + 2.0 * p.dephasing;
    State d;
    d[0] = i_unit * half_rabi * (r[1] - r[2]) + p.gamma * r[3];
    d[1] = -i_unit * p.detuning * r[1] - i_unit * half_rabi * (r[3] - r[0]) - gperp * r[1];
    d[2] = i_unit * p.detuning * r[2] + i_unit * half_rabi * (r[3] - r[0]) - gperp * r[2];
    d[3] = -i_unit * half_rabi * (r[1] - r[2]) - p.gamma * r[3];
    return d;
}

inline State rk4_step(const rfs::SystemParams& p, const State& r, double h) {
    const auto add = [](const State& a, const State& b, double f) {
        State out;
        for (int i = 0; i < 4; ++i) out[i] = a[i] + f * b[i];
        return out;
    };
    const State k1 = bloch_rhs(p, r);
    const State k2 = bloch_rhs(p, add(r, k1, 0.5 * h));
    const State k3 = bloch_rhs(p, add(r, k2, 0.5 * h));
    const State k4 = bloch_rhs(p, add(r, k3, h));
    State out;
    for (int i = 0; i < 4; ++i)
        out[i] = r[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

inline State rk4_evolve(const rfs::SystemParams& p, State r, double t, int steps = 20000) {
    const double h = t / steps;
    for (int k = 0; k < steps; ++k) r = rk4_step(p, r, h);
    return r;
}

// Steady state on resonance without dephasing.
inline double rho_ee_ss(double s) { return s / (2.0 * (1.0 + s)); }
inline double coherence_sq_ss(double s) { return 0.5 * s / ((1.0 + s) * (1.0 + s)); }

// Normally ordered quadrature variance, phi relative to the dipole.
inline double variance_ss(double s, double phi) {
    const double c = std::cos(phi);
    return 0.5 * rho_ee_ss(s) - coherence_sq_ss(s) * c * c;
}

// On-resonance g2 from the Bloch equations,
// g2(tau) = 1 - e^{-3 G tau / 4} (cosh(d tau) + (3G/4d) sinh(d tau)),
// d = sqrt((G/4)^2 - Omega^2) continued to imaginary d above threshold.
inline double closed_form_g2(double gamma, double rabi, double tau) {
    const complexd d2(gamma * gamma / 16.0 - rabi * rabi, 0.0);
    const complexd d = std::sqrt(d2);
    complexd bracket;
    if (std::abs(d * tau) < 1e-6) {
        const complexd dt2 = d * d * tau * tau;
        bracket = (1.0 + 0.5 * dt2) + 0.75 * gamma * tau * (1.0 + dt2 / 6.0);
    } else {
        bracket = std::cosh(d * tau) + 0.75 * gamma / d * std::sinh(d * tau);
    }
    return 1.0 - std::real(std::exp(-0.75 * gamma * tau) * bracket);
}

}  // namespace oracle
