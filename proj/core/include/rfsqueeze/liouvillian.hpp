#pragma once

#include <map>
#include <span>
#include <vector>

#include "rfsqueeze/density_matrix.hpp"
#include "rfsqueeze/system_params.hpp"

namespace rfs {

// Master-equation generator for the driven two-level system: rotating-frame
// Hamiltonian H = -Delta |e><e| + (Omega/2)(sigma_+ + sigma_-), radiative
// dissipator at rate gamma on sigma_-, pure dephasing at rate gamma_d on
// sigma_z. Acts on row-major vectorized states, basis order (gg, ge, eg, ee).
struct Liouvillian {
    Matrix4c generator;
    SystemParams params;

    static constexpr const char* basis_order = "gg,ge,eg,ee";
};

Liouvillian build_liouvillian(const SystemParams& params);

// Unique fixed point of the generator; requires gamma > 0.
DensityMatrix2 steady_state(const Liouvillian& L);

// exp(L tau) evaluated by scaling-and-squaring; caches the exponential per
// distinct step so uniform tau grids cost one matrix exponential.
class Propagator {
public:
    explicit Propagator(const Liouvillian& L);

    Vector4c apply(const Vector4c& v, double tau) const;
    DensityMatrix2 propagate(const DensityMatrix2& rho0, double tau) const;

    // exp(L tau_k) seed for every grid point, reusing step exponentials
    // between consecutive points.
    std::vector<Vector4c> evolve(const Vector4c& seed, std::span<const double> tau_grid) const;

    const Liouvillian& liouvillian() const { return liou_; }

private:
    const Matrix4c& step_matrix(double dt) const;

    Liouvillian liou_;
    mutable std::map<double, Matrix4c> step_cache_;
};

DensityMatrix2 propagate(const Liouvillian& L, const DensityMatrix2& rho0, double tau);

}  // namespace rfs
