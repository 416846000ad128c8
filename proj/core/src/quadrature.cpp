#include "rfsqueeze/quadrature.hpp"

#include <cmath>

#include "rfsqueeze/errors.hpp"
#include "rfsqueeze/liouvillian.hpp"

namespace rfs {

QuadratureValue normally_ordered_variance(const SystemParams& params, double phi) {
    const DensityMatrix2 ss = steady_state(build_liouvillian(params));
    const double m2 = std::norm(ss.sigma_minus_expectation());
    const double c = std::cos(phi);

    QuadratureValue q;
    q.phi = phi;
    q.normally_ordered_variance = 0.5 * ss.rho_ee - m2 * c * c;
    q.full_variance = 0.25 + q.normally_ordered_variance;
    return q;
}

QuadratureScan variance_phase_scan(const SystemParams& params, std::span<const double> phi_grid,
                                   bool coherent_reference) {
    if (phi_grid.empty()) throw invalid_input("empty phase grid");
    params.validate();

    QuadratureScan scan;
    scan.axis = ScanAxis::phase;
    scan.grid.assign(phi_grid.begin(), phi_grid.end());
    scan.params = params;
    scan.variance.resize(phi_grid.size(), 0.0);
    if (coherent_reference) return scan;  // coherent state: exactly zero at every phase

    const DensityMatrix2 ss = steady_state(build_liouvillian(params));
    const double m2 = std::norm(ss.sigma_minus_expectation());
    for (std::size_t i = 0; i < scan.grid.size(); ++i) {
        const double c = std::cos(scan.grid[i]);
        scan.variance[i] = 0.5 * ss.rho_ee - m2 * c * c;
    }
    return scan;
}

std::pair<QuadratureScan, QuadratureScan> variance_power_scan(const SystemParams& params_template,
                                                              std::span<const double> s_grid) {
    if (s_grid.empty()) throw invalid_input("empty saturation grid");
    double prev = 0.0;
    for (double s : s_grid) {
        if (!(s > 0.0)) throw invalid_input("saturation grid must be positive");
        if (s <= prev && prev != 0.0) throw invalid_input("saturation grid must be ascending");
        prev = s;
    }

    QuadratureScan in_phase, out_of_phase;
    in_phase.axis = out_of_phase.axis = ScanAxis::power;
    in_phase.grid.assign(s_grid.begin(), s_grid.end());
    out_of_phase.grid = in_phase.grid;
    in_phase.params = out_of_phase.params = params_template;
    in_phase.variance.reserve(s_grid.size());
    out_of_phase.variance.reserve(s_grid.size());

    for (double s : s_grid) {
        SystemParams p = params_template;
        p.rabi = rabi_from_saturation(s, p.gamma);
        in_phase.variance.push_back(normally_ordered_variance(p, 0.0).normally_ordered_variance);
        out_of_phase.variance.push_back(
            normally_ordered_variance(p, M_PI / 2).normally_ordered_variance);
    }
    return {in_phase, out_of_phase};
}

double dipole_phase(const SystemParams& params) {
    params.validate();
    if (params.rabi <= 0.0) throw undefined_phase("dipole phase undefined at zero drive");
    const DensityMatrix2 ss = steady_state(build_liouvillian(params));
    return std::arg(ss.rho_ge);
}

double heisenberg_product(const SystemParams& params) {
    const double n0 = normally_ordered_variance(params, 0.0).normally_ordered_variance;
    const double n90 = normally_ordered_variance(params, M_PI / 2).normally_ordered_variance;
    return (0.25 + n0) * (0.25 + n90);
}

}  // namespace rfs
