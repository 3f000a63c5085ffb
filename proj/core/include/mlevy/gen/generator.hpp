#pragma once

#include <functional>
#include <string>

#include "mlevy/marcus/marcus.hpp"

namespace mlevy {

// Smooth test function evaluated through charts. `on_manifold` must agree
// across overlapping charts; `on_frame` is optional and used for functions
// living on the frame bundle itself.
struct TestFunction {
    std::function<double(const ChartPoint&)> on_manifold;
    std::function<double(const FramePoint&)> on_frame;
};

struct QuadratureConfig {
    enum class JumpMode { atoms, monte_carlo } mode = JumpMode::atoms;
    int n_samples = 100000;
    std::uint64_t seed = 0;
    double derivative_step = 1e-4; // step for directional derivatives along flows
    int flow_steps = kDefaultStepsPerUnit; // ODE steps for jump endpoints
    int derivative_flow_steps = 16;        // ODE steps for the short derivative flows
    double explosion_bound = kDefaultExplosionBound;
};

// Generator of the horizontal process applied to a frame-bundle function:
// drift and diffusion terms from central finite differences along the
// horizontal flows, jump term by atom sums or Monte Carlo.
double horizontal_generator_apply(const ManifoldSpec& m, const LevyTriplet& triplet,
                                  const std::function<double(const FramePoint&)>& f_bundle,
                                  const FramePoint& v, const QuadratureConfig& quad);

// Generator of the projected process at p = pi(v); identical code path with
// the jump endpoints moved along geodesics on the base.
double generator_apply(const ManifoldSpec& m, const LevyTriplet& triplet, const TestFunction& f,
                       const ChartPoint& p, const FramePoint& v, const QuadratureConfig& quad);

// Symmetrized jump-part generator, valid when -I is a declared holonomy
// generator (so the driver has no drift and the measure is symmetric).
double symmetric_jump_generator(const ManifoldSpec& m, const JumpMeasureSpec& nu,
                                const TestFunction& f, const ChartPoint& p, const FramePoint& v,
                                const QuadratureConfig& quad);

// Built-in test functions: "coordinate:<k>", "sq_norm",
// "bump:<c1,...,cd,width>" (center in chart-0 coordinates). Functions are
// evaluated by mapping points into chart 0; outside its reach a bump is 0.
TestFunction make_test_function(const ManifoldSpec& m, const std::string& spec);

struct WeakErrorReport {
    double estimate = 0.0;       // (E f(X_t) - f(p)) / t
    double std_error = 0.0;
    double generator_value = 0.0;
    double discrepancy = 0.0;
    std::size_t n_paths = 0;
    std::size_t stopped = 0;
    bool valid = true; // false when more than 1% of paths stopped
};

struct WeakTestConfig {
    SimulateOptions sim;
    QuadratureConfig quad;
    int threads = 0; // 0: hardware concurrency
};

// Monte-Carlo check of the generator: difference quotient of E f(X_t)
// against generator_apply. Paths run on per-index substreams; the estimate
// does not depend on the number of worker threads.
WeakErrorReport weak_error_test(const ManifoldSpec& m, const LevyTriplet& triplet,
                                const TestFunction& f, const ChartPoint& p, const FramePoint& v,
                                double t_small, std::size_t n_paths, const WeakTestConfig& config,
                                std::uint64_t seed);

} // namespace mlevy
