#pragma once

#include <string>

namespace rfs {

// Driven two-level emitter in the frame rotating at the laser frequency.
// All rates are angular frequencies in the same (arbitrary) 1/time unit;
// unit tests use gamma = 1, the CLI converts once from the exciton lifetime.
struct SystemParams {
    double gamma = 1.0;      // radiative decay rate
    double rabi = 0.0;       // Rabi frequency of the drive
    double detuning = 0.0;   // laser minus transition frequency
    double dephasing = 0.0;  // pure dephasing rate

    // Saturation convention: s = 2 Omega^2 / Gamma^2, so that on resonance
    // the steady excited population is s / (2 (1 + s)) and s = 1 sits at half
    // the asymptotic emission rate.
    double saturation() const { return 2.0 * rabi * rabi / (gamma * gamma); }

    // Generalized saturation including detuning and dephasing, defined so that
    // rho_ee = s_eff / (2 (1 + s_eff)) always holds in steady state.
    double effective_saturation() const;

    // Transverse coherence decay rate gamma/2 + 2 gamma_d.
    double coherence_decay() const { return 0.5 * gamma + 2.0 * dephasing; }

    static SystemParams from_saturation(double s, double gamma = 1.0,
                                        double detuning = 0.0, double dephasing = 0.0);
    static SystemParams from_lifetime_ns(double lifetime_ns, double s,
                                         double detuning = 0.0, double dephasing = 0.0);

    // Throws invalid_input listing every violated constraint.
    void validate() const;
};

// Omega = Gamma sqrt(s / 2) under the on-resonance, no-dephasing convention.
double rabi_from_saturation(double s, double gamma);

}  // namespace rfs
