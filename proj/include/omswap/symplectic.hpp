#pragma once

// Symplectic form and physicality checks for the (X_M, P_M, X_L, P_L)
// quadrature ordering.

#include <Eigen/Dense>

namespace omswap {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;

// Single-mode block of the symplectic form: [[0,1],[-1,0]].
inline Mat2 omega2() {
    Mat2 w;
    w << 0.0, 1.0, -1.0, 0.0;
    return w;
}

inline Mat4 omega4() {
    Mat4 w = Mat4::Zero();
    w.block<2, 2>(0, 0) = omega2();
    w.block<2, 2>(2, 2) = omega2();
    return w;
}

// Minimum eigenvalue of V + i Omega; >= 0 (up to tolerance) for physical
// covariance matrices in the vacuum-variance-1 convention.
inline double physicality_margin(const Eigen::MatrixXd& cov) {
    const int n = static_cast<int>(cov.rows());
    Eigen::MatrixXcd c = cov.cast<std::complex<double>>();
    const Eigen::MatrixXd omega = (n == 2) ? Eigen::MatrixXd(omega2()) : Eigen::MatrixXd(omega4());
    c += std::complex<double>(0.0, 1.0) * omega;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

inline bool is_physical(const Eigen::MatrixXd& cov, double tol = 1e-9) {
    return physicality_margin(cov) >= -tol;
}

// max |M^T Omega M - Omega| entrywise; 0 for symplectic maps.
inline double symplectic_defect(const Mat4& m) {
    const Mat4 w = omega4();
    return (m.transpose() * w * m - w).cwiseAbs().maxCoeff();
}

}  // namespace omswap
