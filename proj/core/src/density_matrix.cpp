#include "rfsqueeze/density_matrix.hpp"

#include <cmath>
#include <string>

#include "rfsqueeze/errors.hpp"

namespace rfs {

Matrix2c DensityMatrix2::matrix() const {
    Matrix2c m;
    m << rho_gg, rho_ge, std::conj(rho_ge), rho_ee;
    return m;
}

double DensityMatrix2::min_eigenvalue() const {
    const double mean = 0.5 * (rho_gg + rho_ee);
    const double half_gap = 0.5 * (rho_gg - rho_ee);
    return mean - std::sqrt(half_gap * half_gap + std::norm(rho_ge));
}

void DensityMatrix2::validate(double tol) const {
    if (std::abs(trace() - 1.0) > tol)
        throw invalid_input("density matrix trace deviates from 1 by " +
                            std::to_string(trace() - 1.0));
    if (rho_gg * rho_ee < std::norm(rho_ge) - tol)
        throw invalid_input("density matrix not positive semidefinite");
    if (rho_gg < -tol || rho_ee < -tol)
        throw invalid_input("negative population");
}

DensityMatrix2 DensityMatrix2::from_matrix(const Matrix2c& m, double tol) {
    const double herm_defect =
        std::max(std::abs(std::imag(m(0, 0))), std::abs(std::imag(m(1, 1))));
    if (herm_defect > tol || std::abs(m(0, 1) - std::conj(m(1, 0))) > tol)
        throw invalid_input("matrix is not Hermitian within tolerance");
    DensityMatrix2 rho;
    rho.rho_gg = std::real(m(0, 0));
    rho.rho_ee = std::real(m(1, 1));
    rho.rho_ge = 0.5 * (m(0, 1) + std::conj(m(1, 0)));
    rho.validate(tol);
    return rho;
}

Matrix2c op_matrix(AtomicOp op) {
    Matrix2c m = Matrix2c::Zero();
    switch (op) {
        case AtomicOp::identity:
            m.setIdentity();
            break;
        case AtomicOp::sigma_minus:  // |g><e|
            m(0, 1) = 1.0;
            break;
        case AtomicOp::sigma_plus:  // |e><g|
            m(1, 0) = 1.0;
            break;
        case AtomicOp::excited_projector:  // |e><e|
            m(1, 1) = 1.0;
            break;
    }
    return m;
}

Vector4c vectorize(const Matrix2c& m) {
    Vector4c v;
    v << m(0, 0), m(0, 1), m(1, 0), m(1, 1);
    return v;
}

Matrix2c unvectorize(const Vector4c& v) {
    Matrix2c m;
    m << v(0), v(1), v(2), v(3);
    return m;
}

}  // namespace rfs
