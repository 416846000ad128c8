#include "rfsqueeze/liouvillian.hpp"

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "rfsqueeze/errors.hpp"

namespace rfs {

namespace {

// Kronecker product of two 2x2 blocks; with row-major vectorization
// vec(A rho B) = (A kron B^T) vec(rho).
Matrix4c kron2(const Matrix2c& a, const Matrix2c& b) {
    Matrix4c k;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return k;
}

Matrix4c left_mult(const Matrix2c& a) { return kron2(a, Matrix2c::Identity()); }
Matrix4c right_mult(const Matrix2c& b) { return kron2(Matrix2c::Identity(), b.transpose()); }

Matrix4c dissipator(const Matrix2c& c, double rate) {
    const Matrix2c cdc = c.adjoint() * c;
    return rate * (kron2(c, c.adjoint().transpose()) -
                   0.5 * (left_mult(cdc) + right_mult(cdc)));
}

}  // namespace

Liouvillian build_liouvillian(const SystemParams& params) {
    params.validate();

    Matrix2c h = Matrix2c::Zero();
    h(1, 1) = -params.detuning;
    h(0, 1) = 0.5 * params.rabi;
    h(1, 0) = 0.5 * params.rabi;

    const complexd i_unit(0.0, 1.0);
    Matrix4c gen = -i_unit * (left_mult(h) - right_mult(h));
    gen += dissipator(op_matrix(AtomicOp::sigma_minus), params.gamma);
    if (params.dephasing > 0.0) {
        Matrix2c sz = Matrix2c::Zero();
        sz(0, 0) = -1.0;
        sz(1, 1) = 1.0;
        gen += dissipator(sz, params.dephasing);
    }
    return {gen, params};
}

DensityMatrix2 steady_state(const Liouvillian& L) {
    if (!(L.params.gamma > 0.0))
        throw no_unique_steady_state("gamma = 0: generator has no unique fixed point");

    // Replace the rho_gg row (linearly dependent through trace preservation)
    // with the trace constraint and solve exactly.
    Matrix4c a = L.generator;
    a.row(0) << 1.0, 0.0, 0.0, 1.0;
    Vector4c b = Vector4c::Zero();
    b(0) = 1.0;

    Eigen::FullPivLU<Matrix4c> lu(a);
    if (!lu.isInvertible())
        throw no_unique_steady_state("degenerate generator: steady state not unique");
    const Vector4c v = lu.solve(b);

    const double scale = L.generator.norm();
    const double residual = (L.generator * v).norm();
    if (residual > 1e-10 * std::max(scale, 1.0))
        throw accuracy_error("steady-state residual too large", residual / scale);

    return DensityMatrix2::from_matrix(unvectorize(v), 1e-9);
}

Propagator::Propagator(const Liouvillian& L) : liou_(L) { L.params.validate(); }

const Matrix4c& Propagator::step_matrix(double dt) const {
    auto it = step_cache_.find(dt);
    if (it == step_cache_.end()) {
        Matrix4c e = (liou_.generator * dt).exp();
        it = step_cache_.emplace(dt, std::move(e)).first;
    }
    return it->second;
}

Vector4c Propagator::apply(const Vector4c& v, double tau) const {
    if (tau < 0.0) throw invalid_input("propagation time must be >= 0");
    if (tau == 0.0) return v;
    return step_matrix(tau) * v;
}

DensityMatrix2 Propagator::propagate(const DensityMatrix2& rho0, double tau) const {
    rho0.validate();
    const Vector4c v = apply(vectorize(rho0.matrix()), tau);
    return DensityMatrix2::from_matrix(unvectorize(v), 1e-8);
}

std::vector<Vector4c> Propagator::evolve(const Vector4c& seed,
                                         std::span<const double> tau_grid) const {
    std::vector<Vector4c> out;
    out.reserve(tau_grid.size());
    Vector4c v = seed;
    double t = 0.0;
    for (double tau : tau_grid) {
        if (tau < t) throw invalid_input("tau grid must be non-decreasing");
        const double dt = tau - t;
        if (dt > 0.0) v = step_matrix(dt) * v;
        t = tau;
        out.push_back(v);
    }
    return out;
}

DensityMatrix2 propagate(const Liouvillian& L, const DensityMatrix2& rho0, double tau) {
    return Propagator(L).propagate(rho0, tau);
}

}  // namespace rfs
