#pragma once

#include <array>
#include <span>
#include <vector>

#include "rfsqueeze/correlators.hpp"

namespace rfs {

// Classical local oscillator in emitted-field flux units: flux() = |beta|^2
// relative to an RF flux of rho_ee. phase is relative to the mean dipole
// phase (interferometer path phase plus dipole phase folded in).
struct LoConfig {
    double amplitude = 0.0;  // beta >= 0
    double phase = 0.0;      // phi, radians

    double flux() const { return amplitude * amplitude; }
    void validate() const;

    // beta chosen so LO and RF fluxes match (|beta|^2 = rho_ee).
    static LoConfig matched(const SystemParams& params, double phase);
};

// Single-detector intensity of the superimposed field,
// I = I_RF + I_LO + 2 V beta m cos(phi), m = |<sigma_->|. The visibility
// multiplier V lumps mode overlap losses on the cross term.
double sl_intensity(const SystemParams& params, const LoConfig& lo, double visibility = 1.0);

// (I_max - I_min) / (I_max + I_min) of the fringe above.
double fringe_visibility(const SystemParams& params, const LoConfig& lo, double visibility = 1.0);

// Cross-term multiplier that produces a requested overall fringe visibility.
double visibility_for_fringe(const SystemParams& params, const LoConfig& lo,
                             double target_fringe_visibility);

// phi dependence of a correlation quantity, stored per harmonic:
// value(phi) = h0 + 2 Re(e^{i phi} h1) + 2 Re(e^{2 i phi} h2).
struct PhiHarmonicTrace {
    std::vector<double> h0;
    std::vector<complexd> h1;
    std::vector<complexd> h2;

    std::vector<double> eval(double phi, double jitter_sigma = 0.0) const;
};

// Coefficient traces of beta^n, n = 0..4, for G2_total of the superimposed
// field, with the phi structure kept explicit. Shared by the homodyne
// decomposition and the campaign simulator (which attenuates harmonics by
// the phase-jitter characteristic function).
struct HomodyneTerms {
    std::vector<double> tau;
    std::array<PhiHarmonicTrace, 5> term;
    double rho_ee = 0.0;
    double dipole_amplitude = 0.0;  // m

    std::vector<double> total(const LoConfig& lo, double jitter_sigma = 0.0) const;
    double mean_intensity(const LoConfig& lo, double jitter_sigma = 0.0) const;
};

HomodyneTerms homodyne_terms(const SystemParams& params, std::span<const double> tau_grid);

struct HomodyneDecomposition {
    std::array<CorrelationTrace, 5> terms;  // coefficient of beta^n at the LO phase
    CorrelationTrace total;                 // independent single-seed evaluation
    CorrelationTrace quadrature_term;       // <: dX(phi,0) dX(phi,tau) :>
    double quadrature_scale = 0.0;          // 4 beta^2: contribution = scale * quadrature_term
};

// Full intensity autocorrelation of the superimposed field, evaluated in one
// regression run with composite operators (sigma~_- + beta e^{i phi}).
CorrelationTrace g2_total(const SystemParams& params, const LoConfig& lo,
                          std::span<const double> tau_grid);

// Expansion of G2_total by LO order; reconstruction of the total from the
// five terms is exact and serves as the cross-check against g2_total.
HomodyneDecomposition decompose_by_lo_order(const SystemParams& params, const LoConfig& lo,
                                            std::span<const double> tau_grid);

}  // namespace rfs
