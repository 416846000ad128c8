#pragma once

#include <span>
#include <utility>
#include <vector>

#include "rfsqueeze/system_params.hpp"

namespace rfs {

// Quadrature scaling X = (a + a^dag)/2: vacuum variance 1/4, normally ordered
// variances are vacuum-referenced (vacuum = 0, negative = squeezed).
struct QuadratureValue {
    double phi = 0.0;
    double normally_ordered_variance = 0.0;
    double full_variance = 0.25;

    double percent_below_vacuum() const { return -normally_ordered_variance / 0.25 * 100.0; }
};

enum class ScanAxis { phase, power };

struct QuadratureScan {
    ScanAxis axis = ScanAxis::phase;
    std::vector<double> grid;      // radians or saturation values
    std::vector<double> variance;  // normally ordered
    SystemParams params;           // snapshot (power scans: template)
};

// N(phi) = rho_ee/2 - m^2 cos^2(phi), m = |<sigma_->|_ss, phi relative to the
// mean dipole phase so the squeezed quadrature sits at phi = 0.
QuadratureValue normally_ordered_variance(const SystemParams& params, double phi);

QuadratureScan variance_phase_scan(const SystemParams& params, std::span<const double> phi_grid,
                                   bool coherent_reference = false);

// Extremal-phase curves over a saturation grid: (phi = 0, phi = pi/2).
std::pair<QuadratureScan, QuadratureScan> variance_power_scan(const SystemParams& params_template,
                                                              std::span<const double> s_grid);

// arg of the steady coherence <g|rho|e> as a function of detuning; pi/2 on
// resonance, 0 / pi in the far-detuned limits. Throws undefined_phase at
// zero drive.
double dipole_phase(const SystemParams& params);

// (1/4 + N(0)) (1/4 + N(pi/2)); >= 1/16 for every physical state.
double heisenberg_product(const SystemParams& params);

}  // namespace rfs
