#include "rfsqueeze/correlators.hpp"

#include <algorithm>
#include <cmath>

#include "rfsqueeze/errors.hpp"

namespace rfs {

const char* trace_kind_name(TraceKind kind) {
    switch (kind) {
        case TraceKind::g1: return "g1";
        case TraceKind::g2_rf: return "g2_rf";
        case TraceKind::third_order_left: return "third_order_left";
        case TraceKind::third_order_right: return "third_order_right";
        case TraceKind::anomalous: return "anomalous";
        case TraceKind::quadrature_fluct: return "quadrature_fluct";
        case TraceKind::g2_total: return "g2_total";
        case TraceKind::decomposition_term: return "decomposition_term";
    }
    return "unknown";
}

std::vector<double> CorrelationTrace::real_values() const {
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(),
                   [](complexd v) { return v.real(); });
    return out;
}

double CorrelationTrace::max_imag_residue() const {
    double m = 0.0;
    for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
    return m;
}

void CorrelationTrace::validate() const {
    if (tau.empty()) throw invalid_input("empty tau grid");
    if (tau.front() != 0.0) throw invalid_input("tau grid must start at 0");
    for (std::size_t i = 1; i < tau.size(); ++i)
        if (!(tau[i] > tau[i - 1])) throw invalid_input("tau grid must be strictly increasing");
    if (values.size() != tau.size()) throw invalid_input("trace size mismatch");
}

std::vector<double> default_tau_grid(double gamma, int n, double span_over_gamma) {
    if (n < 2) throw invalid_input("tau grid needs at least 2 points");
    if (!(gamma > 0.0)) throw invalid_input("gamma must be > 0");
    std::vector<double> grid(n);
    const double dt = span_over_gamma / gamma / (n - 1);
    for (int i = 0; i < n; ++i) grid[i] = i * dt;
    return grid;
}

std::vector<complexd> regression_values(const Propagator& prop, const Matrix2c& rho_ss,
                                        const Matrix2c& left, const Matrix2c& mid,
                                        const Matrix2c& right, std::span<const double> tau_grid) {
    const Vector4c seed = vectorize(right * rho_ss * left);
    const auto states = prop.evolve(seed, tau_grid);
    std::vector<complexd> out(states.size());
    for (std::size_t k = 0; k < states.size(); ++k)
        out[k] = (mid * unvectorize(states[k])).trace();
    return out;
}

CorrelationTrace two_time_correlator(const SystemParams& params, AtomicOp left, AtomicOp mid,
                                     AtomicOp right, std::span<const double> tau_grid) {
    const Liouvillian L = build_liouvillian(params);
    const Propagator prop(L);
    const Matrix2c rho = steady_state(L).matrix();

    CorrelationTrace trace;
    trace.tau.assign(tau_grid.begin(), tau_grid.end());
    trace.values = regression_values(prop, rho, op_matrix(left), op_matrix(mid),
                                     op_matrix(right), tau_grid);
    trace.kind = TraceKind::g1;
    trace.validate();
    return trace;
}

CorrelationTrace g2_rf(const SystemParams& params, std::span<const double> tau_grid,
                       bool normalized) {
    const Liouvillian L = build_liouvillian(params);
    const Propagator prop(L);
    const DensityMatrix2 ss = steady_state(L);

    CorrelationTrace trace;
    trace.tau.assign(tau_grid.begin(), tau_grid.end());
    trace.values = regression_values(prop, ss.matrix(), op_matrix(AtomicOp::sigma_plus),
                                     op_matrix(AtomicOp::excited_projector),
                                     op_matrix(AtomicOp::sigma_minus), tau_grid);
    trace.kind = TraceKind::g2_rf;
    trace.normalized = normalized;
    if (normalized) {
        if (ss.rho_ee <= 0.0)
            throw invalid_input("cannot normalize g2 at zero excitation (rho_ee = 0)");
        const double scale = 1.0 / (ss.rho_ee * ss.rho_ee);
        for (auto& v : trace.values) v *= scale;
    }
    trace.validate();
    return trace;
}

CorrelationTrace quadrature_fluctuation_autocorrelation(const SystemParams& params, double phi,
                                                        std::span<const double> tau_grid) {
    const Liouvillian L = build_liouvillian(params);
    const Propagator prop(L);
    const DensityMatrix2 ss = steady_state(L);
    const Matrix2c rho = ss.matrix();

    // Rotate sigma_- so the steady dipole amplitude is real positive; every
    // quadrature phase is then measured from the mean dipole phase.
    const complexd dipole = ss.sigma_minus_expectation();
    const double m = std::abs(dipole);
    const complexd rot = m > 0.0 ? dipole / m : complexd(1.0, 0.0);
    const Matrix2c sm = op_matrix(AtomicOp::sigma_minus) / rot;
    const Matrix2c sp = sm.adjoint();
    const Matrix2c id = Matrix2c::Identity();

    // <sigma~_+(0) sigma~_-(tau)> and the anomalous <sigma~_+(0) sigma~_+(tau)>.
    const auto c_pm = regression_values(prop, rho, sp, sm, id, tau_grid);
    const auto c_pp = regression_values(prop, rho, sp, sp, id, tau_grid);

    const complexd e2 = std::exp(complexd(0.0, 2.0 * phi));
    CorrelationTrace trace;
    trace.tau.assign(tau_grid.begin(), tau_grid.end());
    trace.values.resize(tau_grid.size());
    for (std::size_t k = 0; k < trace.values.size(); ++k) {
        const complexd d_pm = c_pm[k] - m * m;
        const complexd d_pp = c_pp[k] - m * m;
        trace.values[k] = 0.5 * (std::real(e2 * d_pp) + std::real(d_pm));
    }
    trace.kind = TraceKind::quadrature_fluct;
    trace.phase = phi;
    trace.validate();
    return trace;
}

}  // namespace rfs
