#include "rfsqueeze/homodyne.hpp"

#include <cmath>

#include "rfsqueeze/errors.hpp"

namespace rfs {

namespace {

struct SteadyFrame {
    Propagator prop;
    Matrix2c rho;
    double rho_ee;
    double m;       // |<sigma_->|
    Matrix2c sm, sp;  // sigma_-+ rotated so <sigma_-> = m (real, >= 0)
};

SteadyFrame steady_frame(const SystemParams& params) {
    const Liouvillian L = build_liouvillian(params);
    Propagator prop(L);
    const DensityMatrix2 ss = steady_state(L);
    const complexd dipole = ss.sigma_minus_expectation();
    const double m = std::abs(dipole);
    const complexd rot = m > 0.0 ? dipole / m : complexd(1.0, 0.0);
    const Matrix2c sm = op_matrix(AtomicOp::sigma_minus) / rot;
    return {std::move(prop), ss.matrix(), ss.rho_ee, m, sm, sm.adjoint()};
}

}  // namespace

void LoConfig::validate() const {
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
        throw invalid_input("LO amplitude must be finite and >= 0");
    if (!std::isfinite(phase)) throw invalid_input("LO phase must be finite");
}

LoConfig LoConfig::matched(const SystemParams& params, double phase) {
    const DensityMatrix2 ss = steady_state(build_liouvillian(params));
    return {std::sqrt(ss.rho_ee), phase};
}

double sl_intensity(const SystemParams& params, const LoConfig& lo, double visibility) {
    lo.validate();
    if (!(visibility >= 0.0 && visibility <= 1.0))
        throw invalid_input("visibility must lie in [0, 1]");
    const SteadyFrame f = steady_frame(params);
    return f.rho_ee + lo.flux() +
           2.0 * visibility * lo.amplitude * f.m * std::cos(lo.phase);
}

double fringe_visibility(const SystemParams& params, const LoConfig& lo, double visibility) {
    lo.validate();
    if (!(visibility >= 0.0 && visibility <= 1.0))
        throw invalid_input("visibility must lie in [0, 1]");
    const SteadyFrame f = steady_frame(params);
    const double mean = f.rho_ee + lo.flux();
    if (!(mean > 0.0)) throw invalid_input("no light on the detector");
    return 2.0 * visibility * lo.amplitude * f.m / mean;
}

double visibility_for_fringe(const SystemParams& params, const LoConfig& lo,
                             double target_fringe_visibility) {
    if (!(target_fringe_visibility >= 0.0 && target_fringe_visibility <= 1.0))
        throw invalid_input("target fringe visibility must lie in [0, 1]");
    const double full = fringe_visibility(params, lo, 1.0);
    if (!(full > 0.0))
        throw invalid_input("fringe has no contrast (zero dipole or zero LO)");
    const double v = target_fringe_visibility / full;
    if (v > 1.0 + 1e-12)
        throw invalid_input("target fringe visibility exceeds the physical maximum");
    return std::min(v, 1.0);
}

std::vector<double> PhiHarmonicTrace::eval(double phi, double jitter_sigma) const {
    const std::size_t n = std::max({h0.size(), h1.size(), h2.size()});
    const double a1 = std::exp(-0.5 * jitter_sigma * jitter_sigma);
    const double a2 = std::exp(-2.0 * jitter_sigma * jitter_sigma);
    const complexd e1 = std::exp(complexd(0.0, phi));
    const complexd e2 = e1 * e1;
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double v = 0.0;
        if (k < h0.size()) v += h0[k];
        if (k < h1.size()) v += 2.0 * a1 * std::real(e1 * h1[k]);
        if (k < h2.size()) v += 2.0 * a2 * std::real(e2 * h2[k]);
        out[k] = v;
    }
    return out;
}

std::vector<double> HomodyneTerms::total(const LoConfig& lo, double jitter_sigma) const {
    lo.validate();
    const double beta = lo.amplitude;
    std::vector<double> out(tau.size(), 0.0);
    double bn = 1.0;
    for (int n = 0; n <= 4; ++n) {
        const auto vals = term[n].eval(lo.phase, jitter_sigma);
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += bn * vals[k];
        bn *= beta;
    }
    return out;
}

double HomodyneTerms::mean_intensity(const LoConfig& lo, double jitter_sigma) const {
    const double a1 = std::exp(-0.5 * jitter_sigma * jitter_sigma);
    return rho_ee + lo.flux() +
           2.0 * lo.amplitude * dipole_amplitude * a1 * std::cos(lo.phase);
}

HomodyneTerms homodyne_terms(const SystemParams& params, std::span<const double> tau_grid) {
    const SteadyFrame f = steady_frame(params);
    const Matrix2c id = Matrix2c::Identity();
    const Matrix2c n_op = f.sp * f.sm;
    const std::size_t n = tau_grid.size();

    HomodyneTerms ht;
    ht.tau.assign(tau_grid.begin(), tau_grid.end());
    ht.rho_ee = f.rho_ee;
    ht.dipole_amplitude = f.m;

    // n = 0: antibunched RF autocorrelation.
    const auto g2 = regression_values(f.prop, f.rho, f.sp, n_op, f.sm, tau_grid);
    ht.term[0].h0.resize(n);
    for (std::size_t k = 0; k < n; ++k) ht.term[0].h0[k] = std::real(g2[k]);

    // n = 1: third-order moments <s+(0) n(tau)> and <s+(0) s+(tau) s-(0)>.
    const auto t_left = regression_values(f.prop, f.rho, f.sp, n_op, id, tau_grid);
    const auto t_right = regression_values(f.prop, f.rho, f.sp, f.sp, f.sm, tau_grid);
    ht.term[1].h1.resize(n);
    for (std::size_t k = 0; k < n; ++k) ht.term[1].h1[k] = t_left[k] + t_right[k];

    // n = 2: field autocorrelation <s+(0) s-(tau)> plus the anomalous
    // <s+(0) s+(tau)> carrying the cos(2 phi) dependence.
    const auto c_pm = regression_values(f.prop, f.rho, f.sp, f.sm, id, tau_grid);
    const auto c_pp = regression_values(f.prop, f.rho, f.sp, f.sp, id, tau_grid);
    ht.term[2].h0.resize(n);
    ht.term[2].h2.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        ht.term[2].h0[k] = 2.0 * std::real(c_pm[k]) + 2.0 * f.rho_ee;
        ht.term[2].h2[k] = c_pp[k];
    }

    // n = 3: 4 m cos(phi) from the four single-operator contractions;
    // n = 4: LO self-correlation.
    ht.term[3].h1.assign(n, complexd(2.0 * f.m, 0.0));
    ht.term[4].h0.assign(n, 1.0);
    return ht;
}

CorrelationTrace g2_total(const SystemParams& params, const LoConfig& lo,
                          std::span<const double> tau_grid) {
    lo.validate();
    const SteadyFrame f = steady_frame(params);
    const complexd b = lo.amplitude * std::exp(complexd(0.0, lo.phase));
    const Matrix2c id = Matrix2c::Identity();

    const Matrix2c e_plus = f.sm + b * id;             // E^+ of the SL field
    const Matrix2c e_minus = f.sp + std::conj(b) * id;  // E^-
    const auto vals = regression_values(f.prop, f.rho, e_minus, e_minus * e_plus, e_plus,
                                        tau_grid);

    CorrelationTrace trace;
    trace.tau.assign(tau_grid.begin(), tau_grid.end());
    trace.values.assign(vals.begin(), vals.end());
    trace.kind = TraceKind::g2_total;
    trace.phase = lo.phase;
    trace.lo_flux = lo.flux();
    trace.validate();
    return trace;
}

HomodyneDecomposition decompose_by_lo_order(const SystemParams& params, const LoConfig& lo,
                                            std::span<const double> tau_grid) {
    lo.validate();
    const HomodyneTerms ht = homodyne_terms(params, tau_grid);

    HomodyneDecomposition d;
    const TraceKind kinds[5] = {TraceKind::g2_rf, TraceKind::decomposition_term,
                                TraceKind::decomposition_term, TraceKind::decomposition_term,
                                TraceKind::decomposition_term};
    for (int n = 0; n <= 4; ++n) {
        CorrelationTrace t;
        t.tau = ht.tau;
        const auto vals = ht.term[n].eval(lo.phase);
        t.values.assign(vals.begin(), vals.end());
        t.kind = kinds[n];
        t.phase = lo.phase;
        t.lo_flux = lo.flux();
        d.terms[n] = std::move(t);
    }

    d.total = g2_total(params, lo, tau_grid);

    // Quadrature payload extracted from the n = 2 term: the deterministic
    // offsets 2 rho_ee + 4 m^2 cos^2(phi) are removed and the remainder is
    // <: dX dX :> up to the reported scale 4 beta^2.
    const double m = ht.dipole_amplitude;
    const double c = std::cos(lo.phase);
    const double offset = 2.0 * ht.rho_ee + 4.0 * m * m * c * c;
    CorrelationTrace q;
    q.tau = ht.tau;
    q.values.resize(ht.tau.size());
    for (std::size_t k = 0; k < q.values.size(); ++k)
        q.values[k] = 0.25 * (d.terms[2].values[k].real() - offset);
    q.kind = TraceKind::quadrature_fluct;
    q.phase = lo.phase;
    q.lo_flux = lo.flux();
    d.quadrature_term = std::move(q);
    d.quadrature_scale = 4.0 * lo.flux();
    return d;
}

}  // namespace rfs
