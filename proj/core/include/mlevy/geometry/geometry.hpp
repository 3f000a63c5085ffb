#pragma once

#include "mlevy/geometry/chart.hpp"

namespace mlevy {

inline constexpr int kDefaultStepsPerUnit = 256;
inline constexpr double kDefaultExplosionBound = 1e6;
inline constexpr double kFrameDetFloor = 1e-12;

// Gamma contraction M(w)^k_l = w^j Gamma^k_{j l}; the transport, geodesic
// and horizontal-field slopes are all built from it.
void christoffel_contract(const Christoffel& gamma, const Vec& w, Mat& out);

// Scratch space for horizontal-field evaluations; reused across integrator
// stages so the hot path performs no allocation.
struct HorizontalWork {
    Christoffel gamma;
    Mat contraction;
    Vec w;
    void ensure(int dim);
};

// Fundamental horizontal direction at a frame. dx = r e and
// dr(k, m) = -(r e)^j Gamma^k_{j l} r^l_m, written into the outputs.
void eval_horizontal(const ManifoldSpec& m, int chart, const Vec& x, const Mat& r,
                     const Vec& e, HorizontalWork& work, Vec& dx, Mat& dr);

TangentAtFrame horizontal_field(const ManifoldSpec& m, const FramePoint& u, const Vec& e);

// Time-1 geodesic with initial velocity v, fixed-step classical RK4 with
// chart hand-over after every step.
ChartPoint geodesic_exp(const ManifoldSpec& m, const ChartPoint& p, const Vec& v,
                        int steps = kDefaultStepsPerUnit,
                        double explosion_bound = kDefaultExplosionBound);

struct GeodesicPath {
    SampledCurve curve;
    Vec end_velocity;
};

GeodesicPath geodesic_path(const ManifoldSpec& m, const ChartPoint& p, const Vec& v,
                           int steps = kDefaultStepsPerUnit,
                           double explosion_bound = kDefaultExplosionBound);

// Time-1 flow of the horizontal field with constant direction c.
FramePoint flow_exp(const ManifoldSpec& m, const FramePoint& u, const Vec& c,
                    int steps = kDefaultStepsPerUnit,
                    double explosion_bound = kDefaultExplosionBound);

// Frame transported along a sampled curve; returns the frame at the curve
// end. The transport matrix in chart bases is the result times r0^{-1}.
Mat parallel_transport(const ManifoldSpec& m, const SampledCurve& curve, const Mat& r0);

struct FramePath {
    std::vector<double> t;
    std::vector<FramePoint> u;
};

FramePath horizontal_lift_smooth(const ManifoldSpec& m, const SampledCurve& curve,
                                 const FramePoint& u0);

// Anti-development w of a smooth sampled curve, one value per curve sample,
// w(0) = 0. Quadrature is Simpson on each segment, matching the transport
// integrator order.
std::vector<Vec> anti_development_smooth(const ManifoldSpec& m, const SampledCurve& curve,
                                         const FramePoint& u0);

// Locate the transition realizing a recorded chart change; null when the
// two points are not related by one arrow of the atlas.
const Transition* find_transition(const ManifoldSpec& m, const ChartPoint& from,
                                  const ChartPoint& to, double tol = 1e-8);

void check_frame_point(const ManifoldSpec& m, const FramePoint& u);

} // namespace mlevy
