#pragma once

#include <complex>

#include <Eigen/Dense>

namespace rfs {

using complexd = std::complex<double>;
using Matrix2c = Eigen::Matrix2cd;
using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

// 2x2 atomic state in the (g, e) basis. rho_ge = <g|rho|e>; rho_eg is its
// conjugate, so <sigma_minus> = conj(rho_ge).
struct DensityMatrix2 {
    double rho_gg = 1.0;
    double rho_ee = 0.0;
    complexd rho_ge = 0.0;

    double trace() const { return rho_gg + rho_ee; }
    complexd sigma_minus_expectation() const { return std::conj(rho_ge); }

    Matrix2c matrix() const;

    // Smallest eigenvalue of the Hermitian 2x2 state.
    double min_eigenvalue() const;

    // Trace, Hermiticity and positivity checks; throws invalid_input.
    void validate(double tol = 1e-9) const;

    static DensityMatrix2 ground() { return {1.0, 0.0, 0.0}; }
    static DensityMatrix2 excited() { return {0.0, 1.0, 0.0}; }

    // Folds numerical residues (imaginary diagonals) and validates.
    static DensityMatrix2 from_matrix(const Matrix2c& m, double tol = 1e-9);
};

// Operator ids accepted by the regression engine.
enum class AtomicOp { identity, sigma_minus, sigma_plus, excited_projector };

Matrix2c op_matrix(AtomicOp op);

// Row-major vectorization in the fixed basis order (gg, ge, eg, ee).
Vector4c vectorize(const Matrix2c& m);
Matrix2c unvectorize(const Vector4c& v);

}  // namespace rfs
