#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mlevy/marcus/marcus.hpp"

namespace mlevy {

// Measurable section of the frame bundle, patched from smooth per-chart
// frame fields: at a point the first chart in `priority` that covers it
// supplies the frame. `frame(chart, x)` is expressed in that chart's basis.
struct SectionSpec {
    std::string id;
    std::vector<int> priority;
    std::function<Mat(int chart, const Vec& x)> frame;
};

// Identity frame field on every chart, patched by chart priority.
SectionSpec identity_section(const ManifoldSpec& m);

// Section value at a point, expressed in the basis of `at.chart`.
Mat section_frame(const ManifoldSpec& m, const SectionSpec& q, const ChartPoint& at);

struct JumpEntry {
    double t = 0.0;
    Vec j;
};

// Jump data of a cadlag manifold path relative to a section: each entry
// says which geodesic realizes the jump at its time. Entries at times where
// the path does not move are allowed (loops).
struct JumpData {
    std::string section_id;
    std::vector<JumpEntry> entries;

    const JumpEntry* at_time(double t) const;
    double sum_squares() const;
};

void to_json(nlohmann::json& j, const JumpData& jd);
void from_json(const nlohmann::json& j, JumpData& jd);

struct LiftConfig {
    int jump_ode_steps = 64;
    int geodesic_check_steps = kDefaultStepsPerUnit;
    double jump_tol = 1e-5;
    double explosion_bound = kDefaultExplosionBound;
};

// Verify that J represents the jumps of X: every path jump has an entry
// whose geodesic reproduces the landing point within jump_tol, and entries
// at quiet times must return to their start point. Throws
// JumpMismatchError otherwise.
void validate_jump_data(const ManifoldSpec& m, const ManifoldPath& x, const JumpData& jd,
                        const SectionSpec& q, const LiftConfig& config = {});

// Horizontal lift of (X, J) with initial frame u0: linear transport along
// the continuous part (Heun on the path grid) and the flow-exponential
// rule at jumps.
BundlePath reconstruct_lift(const ManifoldSpec& m, const ManifoldPath& x, const JumpData& jd,
                            const SectionSpec& q, const FramePoint& u0,
                            const LiftConfig& config = {});

// Anti-development of X given its lift: midpoint quadrature of the inverse
// frames against dX plus the jump increments U^{-1} q J.
EuclidPath reconstruct_antidev(const ManifoldSpec& m, const ManifoldPath& x,
                               const BundlePath& lift, const JumpData& jd,
                               const SectionSpec& q);

// Read the jump data off a forward simulation: J_s = q(X_{s-})^{-1} U_{s-} dY_s.
JumpData jump_data_from_simulation(const ManifoldSpec& m, const ManifoldPath& x,
                                   const BundlePath& u, const EuclidPath& y,
                                   const SectionSpec& q);

} // namespace mlevy
