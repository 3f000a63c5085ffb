#pragma once

#include <Eigen/Dense>

namespace mlevy {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Symmetric positive semidefinite square root, used to factor diffusion
// matrices. Eigenvalues below -tol are rejected by callers.
inline Mat psd_sqrt(const Mat& a) {
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    Vec ev = es.eigenvalues();
    for (int i = 0; i < ev.size(); ++i) ev[i] = ev[i] > 0.0 ? std::sqrt(ev[i]) : 0.0;
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

inline Mat rotation2(double angle) {
    Mat r(2, 2);
    r << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    return r;
}

} // namespace mlevy
