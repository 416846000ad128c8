#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rfsqueeze/liouvillian.hpp"

namespace rfs {

enum class TraceKind {
    g1,
    g2_rf,
    third_order_left,
    third_order_right,
    anomalous,
    quadrature_fluct,
    g2_total,
    decomposition_term,
};

const char* trace_kind_name(TraceKind kind);

// Two-time correlator samples on a tau grid. Complex-valued in general;
// real-valued kinds keep a tiny imaginary residue that callers may check.
struct CorrelationTrace {
    std::vector<double> tau;
    std::vector<complexd> values;
    TraceKind kind = TraceKind::g1;
    std::optional<double> phase;  // phi relative to the mean dipole phase
    std::optional<double> lo_flux;  // |beta|^2 when an LO is involved
    bool normalized = false;

    std::vector<double> real_values() const;
    double max_imag_residue() const;
    void validate() const;  // grid starts at 0, strictly increasing, sizes match
};

// Uniform grid over [0, span_over_gamma / gamma], n points, starting at 0.
std::vector<double> default_tau_grid(double gamma, int n = 400, double span_over_gamma = 15.0);

// <A(0) B(tau) C(0)> in steady state via the quantum regression theorem:
// tr[ B exp(L tau) (C rho_ss A) ].
CorrelationTrace two_time_correlator(const SystemParams& params, AtomicOp left, AtomicOp mid,
                                     AtomicOp right, std::span<const double> tau_grid);

// Matrix-operator regression kernel shared with the homodyne module.
std::vector<complexd> regression_values(const Propagator& prop, const Matrix2c& rho_ss,
                                        const Matrix2c& left, const Matrix2c& mid,
                                        const Matrix2c& right, std::span<const double> tau_grid);

// Intensity autocorrelation of resonance fluorescence,
// <sigma_+(0) sigma_+ sigma_-(tau) sigma_-(0)>, normalized by rho_ee^2 when
// requested. g2(0) = 0 for a single two-level emitter.
CorrelationTrace g2_rf(const SystemParams& params, std::span<const double> tau_grid,
                       bool normalized = true);

// Normally ordered, time ordered autocorrelation of the quadrature
// fluctuations, <: dX(phi,0) dX(phi,tau) :> with
// X(phi) = (sigma_- e^{-i phi} + sigma_+ e^{i phi})/2 in the frame rotated so
// the steady dipole is real positive (phi = 0 is the in-phase quadrature).
// The value at tau = 0 is the normally ordered variance.
CorrelationTrace quadrature_fluctuation_autocorrelation(const SystemParams& params, double phi,
                                                        std::span<const double> tau_grid);

}  // namespace rfs
