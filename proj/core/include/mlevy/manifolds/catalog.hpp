#pragma once

#include <optional>
#include <string>

#include "mlevy/geometry/geometry.hpp"
#include "mlevy/lift/lift.hpp"
#include "mlevy/manifolds/liegroup.hpp"

namespace mlevy {

struct HolonomySpec {
    enum class Kind { trivial, finite_cyclic, z2_reflection, special_orthogonal, dense_cyclic };
    Kind kind = Kind::trivial;
    int cyclic_order = 1; // finite_cyclic
    double alpha = 0.0;   // dense_cyclic rotation parameter
    std::vector<Mat> generators;

    std::string describe() const;
    // Closure enumeration (up to 64 elements) for the finite kinds.
    void validate(int dim) const;
};

// A catalog entry: the chart/connection data plus the holonomy metadata,
// the section used by the lift module, and a canonical start frame.
struct BuiltManifold {
    ManifoldSpec manifold;
    HolonomySpec holonomy;
    SectionSpec section;
    FramePoint default_start;

    // Present for lie:* entries.
    std::optional<LieGroupSpec> group;
    std::vector<Mat> chart_centers_group;

    Mat point_to_group(const ChartPoint& p) const;
    ChartPoint group_to_point(const Mat& g) const;
};

// Names: flat:d=2, torus:n=2, klein_bottle:dim=2, sphere:d=2,
// cylinder:alpha=0.5, lie:so3, lie:heisenberg.
BuiltManifold build_manifold(const std::string& name);

// ---- loop families for holonomy probes ----

using LoopFamily = std::function<SampledCurve(int)>;

// Straight walk in chart coordinates by `displacement`, threading chart
// transitions; exact for the flat-family atlases.
SampledCurve thread_straight(const ManifoldSpec& m, const ChartPoint& start,
                             const Vec& displacement, int samples);

// k-fold loop along coordinate direction `dir` with period `period`.
LoopFamily coordinate_loops(const ManifoldSpec& m, const ChartPoint& base, int dir,
                            double period, int samples);

// Geodesic triangle with three right angles on sphere(2) (one octant).
SampledCurve sphere_octant_loop(const ManifoldSpec& m, int steps_per_edge, bool clockwise);

// Transport matrices around each loop of the family, based at `base`.
std::vector<Mat> holonomy_estimate(const ManifoldSpec& m, const ChartPoint& base,
                                   const LoopFamily& loops, int n_loops);

} // namespace mlevy
