#pragma once

#include "mlevy/types.hpp"

namespace mlevy {

// Matrix exponential by scaling-and-squaring over the truncated power
// series; adequate for the small matrices of the built-in groups.
Mat expm_series(const Mat& a, double tol = 1e-15);

Mat so3_hat(const Vec& w);
Vec so3_vee(const Mat& a);
Mat so3_exp(const Vec& w);
// Rotation log, valid away from angle pi.
Vec so3_log(const Mat& r);
// Chart components of the left-invariant frame in canonical coordinates:
// column j of so3_left_frame(x) is the coordinate velocity of the curve
// t -> exp(hat(x)) exp(t hat(e_j)) at t = 0, and so3_left_frame_inv is its
// inverse (the right Jacobian of exp).
Mat so3_left_frame(const Vec& x);
Mat so3_left_frame_inv(const Vec& x);

// Heisenberg group as unipotent upper-triangular 3x3 matrices with
// canonical coordinates (a, b, c) -> [[0,a,c],[0,0,b],[0,0,0]].
Mat heis_hat(const Vec& w);
Vec heis_vee(const Mat& a);
Mat heis_exp(const Vec& w);
Vec heis_log(const Mat& g);

} // namespace mlevy
