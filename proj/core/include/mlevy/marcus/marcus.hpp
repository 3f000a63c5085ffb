#pragma once

#include <optional>
#include <string>

#include "mlevy/euclid/invariance.hpp"
#include "mlevy/euclid/path.hpp"
#include "mlevy/euclid/sampler.hpp"
#include "mlevy/geometry/geometry.hpp"

namespace mlevy {

struct MarcusConfig {
    int diffusion_substeps = 4;   // Heun steps per driver cell
    int jump_ode_steps = 64;      // RK4 steps for each jump flow
    double explosion_bound = kDefaultExplosionBound;
    enum class Scheme { stratonovich_midpoint } scheme = Scheme::stratonovich_midpoint;

    void validate() const;
};

enum class StopReason { explosion, chart_coverage };

struct StopInfo {
    double time = 0.0;
    StopReason reason = StopReason::explosion;
    std::string detail;
};

struct BundleJump {
    std::size_t index = 0; // grid index of the post-jump state
    double t = 0.0;
    FramePoint pre;
    FramePoint post;
    Vec dy; // driver jump, after any field transformation
};

// Frame-bundle path on the driver grid; truncated at stopped_at when the
// solution left the atlas or the coordinate bounds.
struct BundlePath {
    std::vector<double> t;
    std::vector<FramePoint> u;
    std::vector<BundleJump> jumps;
    std::optional<StopInfo> stopped_at;

    const BundleJump* jump_at(std::size_t index) const;
};

struct ManifoldJump {
    std::size_t index = 0;
    double t = 0.0;
    ChartPoint pre;
    ChartPoint post;
    Vec jump_vector; // empty until jump data is attached
};

struct ManifoldPath {
    std::vector<double> t;
    std::vector<ChartPoint> p;
    std::vector<ManifoldJump> jumps;
    std::optional<StopInfo> stopped_at;

    const ManifoldJump* jump_at(std::size_t index) const;
};

// Solve dU = H_i(U-) o dY^i with the jump-adapted scheme: Heun
// (Stratonovich midpoint) sub-steps through each driver cell and the exact
// Marcus rule U_s = flow_exp(U_{s-}, dY_s) at driver jumps. Explosion and
// coverage loss are recorded as stops, not thrown. When `field_matrix` is
// given the driving fields are H_{g e_i}, i.e. the driver is g-transformed.
BundlePath marcus_solve(const ManifoldSpec& m, const EuclidPath& driver, const FramePoint& u0,
                        const MarcusConfig& config, const Mat* field_matrix = nullptr);

ManifoldPath project(const BundlePath& bundle);

struct SimulateOptions {
    MarcusConfig marcus;
    double grid_step = 1.0 / kDefaultStepsPerUnit;
    bool enforce_invariance = true;
    int invariance_n_mc = 512;
    double invariance_tol = 1e-8;
};

struct SimulationResult {
    ManifoldPath x;
    BundlePath u;
    EuclidPath y;
};

// Sample a driver, solve, and project. The triplet must pass
// check_invariance against the manifold's declared holonomy generators
// unless enforcement is switched off. `stream` selects the RNG substream
// (one per path index).
SimulationResult simulate_levy_on_manifold(const ManifoldSpec& m, const LevyTriplet& triplet,
                                           const FramePoint& u0, double horizon,
                                           const SimulateOptions& opts, std::uint64_t seed,
                                           std::uint64_t stream = 0);

// Terminal state only; shares the stepping code with marcus_solve and skips
// path storage. Used by Monte-Carlo estimators.
struct TerminalResult {
    FramePoint u;
    bool stopped = false;
};

TerminalResult marcus_terminal(const ManifoldSpec& m, const EuclidPath& driver,
                               const FramePoint& u0, const MarcusConfig& config);

} // namespace mlevy
