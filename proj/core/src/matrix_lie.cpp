#include "mlevy/manifolds/matrix_lie.hpp"

#include <cmath>

#include "mlevy/errors.hpp"

namespace mlevy {

Mat expm_series(const Mat& a, double tol) {
    const double norm = a.cwiseAbs().sum();
    int squarings = 0;
    Mat t = a;
    while (t.cwiseAbs().sum() > 0.5) {
        t *= 0.5;
        ++squarings;
        if (squarings > 64) throw Error("expm_series: matrix norm too large");
    }
    Mat result = Mat::Identity(a.rows(), a.cols());
    Mat term = Mat::Identity(a.rows(), a.cols());
    for (int k = 1; k <= 40; ++k) {
        term = (term * t) / static_cast<double>(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() < tol) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    (void)norm;
    return result;
}

Mat so3_hat(const Vec& w) {
    Mat a = Mat::Zero(3, 3);
    a(0, 1) = -w[2];
    a(0, 2) = w[1];
    a(1, 0) = w[2];
    a(1, 2) = -w[0];
    a(2, 0) = -w[1];
    a(2, 1) = w[0];
    return a;
}

Vec so3_vee(const Mat& a) {
    Vec w(3);
    w << a(2, 1), a(0, 2), a(1, 0);
    return w;
}

Mat so3_exp(const Vec& w) {
    const double theta = w.norm();
    const Mat k = so3_hat(w);
    double c1, c2; // sin(t)/t, (1-cos t)/t^2
    if (theta < 1e-6) {
        const double t2 = theta * theta;
        c1 = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
        c2 = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
    } else {
        c1 = std::sin(theta) / theta;
        c2 = (1.0 - std::cos(theta)) / (theta * theta);
    }
    return Mat::Identity(3, 3) + c1 * k + c2 * (k * k);
}

Vec so3_log(const Mat& r) {
    const double arg = 0.5 * (r.trace() - 1.0);
    const double theta = std::acos(std::min(1.0, std::max(-1.0, arg)));
    Vec v = so3_vee(0.5 * (r - r.transpose())); // |v| = sin(theta)
    if (theta < 1e-7) return v;                 // v is already first order accurate
    if (theta > M_PI - 1e-5)
        throw Error("so3_log: rotation too close to angle pi for this chart layout");
    return (theta / std::sin(theta)) * v;
}

Mat so3_left_frame(const Vec& x) {
    const double theta = x.norm();
    const Mat k = so3_hat(x);
    double beta;
    if (theta < 1e-2) {
        const double t2 = theta * theta;
        beta = 1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0;
    } else {
        beta = 1.0 / (theta * theta) -
               (1.0 + std::cos(theta)) / (2.0 * theta * std::sin(theta));
    }
    return Mat::Identity(3, 3) + 0.5 * k + beta * (k * k);
}

Mat so3_left_frame_inv(const Vec& x) {
    const double theta = x.norm();
    const Mat k = so3_hat(x);
    double c2, c3; // (1-cos t)/t^2, (t - sin t)/t^3
    if (theta < 1e-4) {
        const double t2 = theta * theta;
        c2 = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
        c3 = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
    } else {
        c2 = (1.0 - std::cos(theta)) / (theta * theta);
        c3 = (theta - std::sin(theta)) / (theta * theta * theta);
    }
    return Mat::Identity(3, 3) - c2 * k + c3 * (k * k);
}

Mat heis_hat(const Vec& w) {
    Mat a = Mat::Zero(3, 3);
    a(0, 1) = w[0];
    a(1, 2) = w[1];
    a(0, 2) = w[2];
    return a;
}

Vec heis_vee(const Mat& a) {
    Vec w(3);
    w << a(0, 1), a(1, 2), a(0, 2);
    return w;
}

Mat heis_exp(const Vec& w) {
    // exp of a strictly upper triangular 3x3: I + N + N^2/2
    const Mat n = heis_hat(w);
    return Mat::Identity(3, 3) + n + 0.5 * (n * n);
}

Vec heis_log(const Mat& g) {
    const Mat n = g - Mat::Identity(3, 3);
    return heis_vee(n - 0.5 * (n * n));
}

} // namespace mlevy
