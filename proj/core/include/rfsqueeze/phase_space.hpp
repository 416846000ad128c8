#pragma once

#include <array>
#include <vector>

#include "rfsqueeze/density_matrix.hpp"

namespace rfs {

// Single-mode field state truncated to the {|0>, |1>} Fock space.
// coh = <0|rho|1>; the annihilation-operator mean is conj(coh), equal to
// <sigma_-> of the source atom under the sigma_- <-> a identification.
struct FieldModeState {
    double p0 = 1.0;
    double p1 = 0.0;
    complexd coh = 0.0;

    FieldModeState rotated(double theta) const {
        return {p0, p1, coh * std::exp(complexd(0.0, theta))};
    }
    // Coherence rotated onto the real axis (squeezing aligned with x1).
    FieldModeState dipole_aligned() const;
    void validate(double tol = 1e-9) const;
};

// Single-temporal-mode identification of the emitted field with the atomic
// state: p1 = rho_ee, coh = rho_ge.
FieldModeState field_state_from_atom(const DensityMatrix2& rho);

struct WignerGridSpec {
    double extent = 4.0;       // grid spans [-extent, extent] on both axes
    int points_per_axis = 129;
    double norm_tol = 1e-6;
};

struct WignerGrid {
    std::vector<double> x1_axis, x2_axis;
    std::vector<double> values;  // row-major: values[i1 * x2_axis.size() + i2]
    double cell_area = 0.0;

    double at(std::size_t i1, std::size_t i2) const { return values[i1 * x2_axis.size() + i2]; }
    double integral() const;
    double max_value() const;
    // Mean and variance of the marginal along axis 0 (x1) or 1 (x2).
    std::array<double, 2> marginal_moments(int axis) const;
};

// W(x1, x2) with X = (a + a^dag)/2 scaling (vacuum peak 2/pi, variance 1/4).
// Throws accuracy_error when the grid cannot normalize within spec.norm_tol.
WignerGrid wigner(const FieldModeState& state, const WignerGridSpec& spec = {});

using PhasePoint = std::array<double, 2>;
using Polyline = std::vector<PhasePoint>;

// Closed level-set polylines at half the grid maximum (marching squares).
// An empty level set yields an empty result.
std::vector<Polyline> half_max_contour(const WignerGrid& grid);

}  // namespace rfs
