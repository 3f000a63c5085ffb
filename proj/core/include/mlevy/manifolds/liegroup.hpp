#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mlevy/manifolds/matrix_lie.hpp"
#include "mlevy/rng.hpp"

namespace mlevy {

// Matrix Lie group with a chosen algebra basis. `hat` maps R^dim to the
// algebra; exp is the truncated-series matrix exponential; log must be
// valid on the range the charts use.
struct LieGroupSpec {
    std::string name;
    int mat_dim = 3;
    int dim = 3;
    std::vector<Mat> basis;
    std::function<Mat(const Mat&)> exp_fn;
    std::function<Vec(const Mat&)> log_fn; // returns algebra coordinates
    std::function<double(const Mat&)> membership_residual;

    Mat hat(const Vec& w) const;
    Vec exp_coords(const Vec& w) const { return w; }
    Mat exp(const Vec& w) const { return exp_fn(hat(w)); }
    Mat identity() const { return Mat::Identity(mat_dim, mat_dim); }
    Mat product(const Mat& a, const Mat& b) const { return a * b; }

    // exp(0) = I and closure of sampled products, within 1e-10.
    void validate(RngStream& rng, int n_samples = 32) const;
};

LieGroupSpec lie_so3();
LieGroupSpec lie_heisenberg();

} // namespace mlevy
