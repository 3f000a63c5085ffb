#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mlevy/errors.hpp"
#include "mlevy/types.hpp"

namespace mlevy {

// Christoffel symbols at a point: G[k](i, j) holds the coefficient of the
// k-th coordinate field in the derivative of field j along field i. Not
// assumed symmetric in (i, j); connections with torsion are allowed.
using Christoffel = std::vector<Mat>;

// Per-chart symbol evaluator. Writes into `out`, which callers keep sized
// (dim matrices of dim x dim) so hot loops do not allocate.
using ChristoffelFn = std::function<void(const Vec& x, Christoffel& out)>;

struct Transition {
    int to = -1;
    std::function<Vec(const Vec&)> map;
    std::function<Mat(const Vec&)> jacobian;
};

// A coordinate chart. Coordinates are trusted while |x - center| < radius;
// integrators hand over to a neighbor once 80% of the radius is reached.
struct Chart {
    int id = 0;
    int dim = 0;
    Vec center;
    double radius = 0.0;
    std::vector<Transition> neighbors;

    double margin(const Vec& x) const { return radius - (x - center).norm(); }
    bool contains(const Vec& x) const { return margin(x) > 0.0; }
};

struct ManifoldSpec {
    std::string name;
    int dim = 0;
    std::vector<Chart> atlas;
    std::vector<ChristoffelFn> christoffel;
    // Declared generators of the holonomy group, identity omitted. Used by
    // the invariance gate; empty means "declared trivial".
    std::vector<Mat> holonomy_generators;

    const Chart& chart(int id) const;
};

struct ChartPoint {
    int chart = 0;
    Vec x;
};

// A frame u over a base point: column m of `r` holds the chart components
// of the m-th frame vector.
struct FramePoint {
    int chart = 0;
    Vec x;
    Mat r;
};

struct TangentAtFrame {
    Vec dx;
    Mat dr;
};

// Piecewise-smooth curve as a dense sampling. Two samples with equal time
// re-express the same point in a neighboring chart; all other consecutive
// samples must share a chart and are interpolated with linear velocity.
struct SampledCurve {
    std::vector<double> t;
    std::vector<ChartPoint> p;

    std::size_t size() const { return t.size(); }
};

Christoffel make_christoffel_storage(int dim);

// Evaluate the symbols with the safe-region check.
Christoffel christoffel_at(const ManifoldSpec& m, int chart, const Vec& x);

// Point transition between two specific charts; throws NoTransitionError if
// the atlas has no direct arrow, ChartDomainError if the image misses the
// target region. When `frame` is given it is pushed through the Jacobian.
ChartPoint chart_transition(const ManifoldSpec& m, const ChartPoint& from, int to_chart);
FramePoint chart_transition(const ManifoldSpec& m, const FramePoint& from, int to_chart);

// Chart switching rule shared by all integrators: once |x - c| >= 0.8 rho,
// move to the neighbor that holds the point with the largest margin (ties:
// lowest chart id), repeating while this strictly improves the margin.
// `on_jacobian` is applied to whatever frame data rides along; it receives
// the chart the point is leaving. Returns the (possibly new) chart id;
// throws ChartCoverageError when the point is not covered at all.
using ChartSwitchHook = std::function<void(const Mat& jac, const Vec& x_pre, int chart_pre)>;
int enforce_chart(const ManifoldSpec& m, int chart, Vec& x, const ChartSwitchHook& on_jacobian);

// True when the two chart points describe the same manifold point up to
// `tol`, comparing either directly or through one transition.
bool same_point(const ManifoldSpec& m, const ChartPoint& a, const ChartPoint& b, double tol);

// Distance between chart representations after mapping to a common chart;
// +inf when no direct transition relates them.
double point_distance(const ManifoldSpec& m, const ChartPoint& a, const ChartPoint& b);

} // namespace mlevy
