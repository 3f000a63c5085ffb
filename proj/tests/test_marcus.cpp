#include "doctest.h"

#include <cmath>

#include "mlevy/manifolds/catalog.hpp"
#include "mlevy/stats.hpp"
#include "test_support.hpp"

using namespace mlevy;
using namespace mlevy::testing;

namespace {

Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

EuclidPath zero_driver(int d, double horizon, int cells) {
    EuclidPath y;
    for (int i = 0; i <= cells; ++i) {
        y.t.push_back(horizon * i / cells);
        y.values.push_back(Vec::Zero(d));
        y.regular_index.push_back(i);
    }
    return y;
}

} // namespace

TEST_CASE("zero driver keeps the start frame; flat drivers act affinely") {
    const BuiltManifold cyl = build_manifold("cylinder:alpha=0.5");
    MarcusConfig config;
    const BundlePath still = marcus_solve(cyl.manifold, zero_driver(2, 1.0, 16),
                                          cyl.default_start, config);
    CHECK(!still.stopped_at);
    CHECK((still.u.back().x - cyl.default_start.x).norm() == 0.0);
    CHECK((still.u.back().r - cyl.default_start.r).norm() == 0.0);

    const BuiltManifold flat = build_manifold("flat:d=2");
    LevyTriplet t = make_triplet(0.7 * Mat::Identity(2, 2), vec2(0.5, -0.2),
                                 make_two_atoms(vec2(1.2, 0.4), 1.0));
    RngStream rng(3, 1);
    const EuclidPath y = sample_levy_path(t, 1.0, 1.0 / 64, rng);
    RngStream rng2(21);
    const Mat r0 = random_gl(2, rng2);
    const Vec x0 = vec2(0.3, 0.9);
    const BundlePath u = marcus_solve(flat.manifold, y, FramePoint{0, x0, r0}, config);
    REQUIRE(!u.stopped_at);
    for (std::size_t i = 0; i < y.size(); ++i) {
        CHECK((u.u[i].x - (x0 + r0 * y.values[i])).norm() <= 1e-12);
        CHECK((u.u[i].r - r0).norm() <= 1e-12);
    }
}

TEST_CASE("pure drift reduces to the horizontal flow") {
    const BuiltManifold sph = build_manifold("sphere:d=2");
    const Vec e = vec2(0.8, -0.3);
    EuclidPath y = zero_driver(2, 1.0, 256);
    for (std::size_t i = 0; i < y.size(); ++i) y.values[i] = y.t[i] * e;

    MarcusConfig config;
    config.diffusion_substeps = 4;
    const BundlePath u = marcus_solve(sph.manifold, y, sph.default_start, config);
    REQUIRE(!u.stopped_at);
    const FramePoint direct = flow_exp(sph.manifold, sph.default_start, e, 1024);
    CHECK(point_distance(sph.manifold, ChartPoint{u.u.back().chart, u.u.back().x},
                         ChartPoint{direct.chart, direct.x}) <= 1e-6);
    REQUIRE(u.u.back().chart == direct.chart);
    CHECK((u.u.back().r - direct.r).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("projection: jumps ride geodesics") {
    const BuiltManifold cyl = build_manifold("cylinder:alpha=0.5");
    LevyTriplet t = make_triplet(0.3 * Mat::Identity(2, 2), Vec::Zero(2),
                                 make_two_atoms(vec2(0.9, 0.2), 3.0));
    SimulateOptions opts;
    const SimulationResult sim =
        simulate_levy_on_manifold(cyl.manifold, t, cyl.default_start, 1.0, opts, 2024, 0);
    REQUIRE(!sim.x.stopped_at);
    REQUIRE(!sim.x.jumps.empty());
    for (const ManifoldJump& jump : sim.x.jumps) {
        const BundleJump* bj = sim.u.jump_at(jump.index);
        REQUIRE(bj != nullptr);
        const ChartPoint landing =
            geodesic_exp(cyl.manifold, jump.pre, bj->pre.r * bj->dy, 512);
        CHECK(point_distance(cyl.manifold, landing, jump.post) <= 1e-5);
    }
    CHECK(sim.x.t.size() == sim.u.t.size());
}

TEST_CASE("holonomy invariance gate") {
    SimulateOptions opts;
    opts.invariance_n_mc = 256;

    // torus: trivial holonomy accepts anything
    const BuiltManifold torus = build_manifold("torus:n=2");
    LevyTriplet skew = make_triplet(Mat::Identity(2, 2), vec2(0.4, 0.0),
                                    make_point_masses({PointMass{vec2(0.5, 0.2), 1.0}}));
    CHECK_NOTHROW(
        simulate_levy_on_manifold(torus.manifold, skew, torus.default_start, 0.25, opts, 7, 0));

    // klein bottle rejects a measure that ignores diag(-1, 1)
    const BuiltManifold klein = build_manifold("klein_bottle:dim=2");
    CHECK_THROWS_AS(
        simulate_levy_on_manifold(klein.manifold, skew, klein.default_start, 0.25, opts, 7, 0),
        InvarianceError);
    // ... but accepts the symmetric two-atom measure
    LevyTriplet sym = make_triplet(Mat::Identity(2, 2), Vec::Zero(2),
                                   make_two_atoms(vec2(1.0, 0.0), 1.0));
    CHECK_NOTHROW(
        simulate_levy_on_manifold(klein.manifold, sym, klein.default_start, 0.25, opts, 7, 0));

    // cylinder alpha = 1/2: holonomy {I, -I}, symmetric atoms pass
    const BuiltManifold cyl = build_manifold("cylinder:alpha=0.5");
    CHECK_NOTHROW(
        simulate_levy_on_manifold(cyl.manifold, sym, cyl.default_start, 0.25, opts, 7, 0));
    CHECK_THROWS_AS(
        simulate_levy_on_manifold(cyl.manifold, skew, cyl.default_start, 0.25, opts, 7, 0),
        InvarianceError);
    // override switch
    opts.enforce_invariance = false;
    CHECK_NOTHROW(
        simulate_levy_on_manifold(cyl.manifold, skew, cyl.default_start, 0.25, opts, 7, 0));
}

TEST_CASE("defining identity residual shrinks at order >= 0.9 under refinement") {
    const BuiltManifold cyl = build_manifold("cylinder:alpha=0.5");
    LevyTriplet t = make_triplet(0.25 * Mat::Identity(2, 2), vec2(0.2, 0.1),
                                 make_two_atoms(vec2(0.4, 0.0), 2.0));
    MarcusConfig config;
    config.diffusion_substeps = 1; // residual should see the cell resolution

    const double fine_step = 1.0 / 1024;
    std::vector<double> steps = {fine_step * 4, fine_step * 2, fine_step};
    std::vector<double> mean_residual(3, 0.0);
    const int n_seeds = 24;

    for (int s = 0; s < n_seeds; ++s) {
        RngStream rng(900 + s, 0);
        const EuclidPath fine = sample_levy_path(t, 0.5, fine_step, rng);
        for (int level = 0; level < 3; ++level) {
            const EuclidPath driver = coarsen(fine, 1 << (2 - level));
            const BundlePath u = marcus_solve(cyl.manifold, driver, cyl.default_start, config);
            REQUIRE(!u.stopped_at);

            // coordinate functions of the frame bundle chart: x and r entries
            const int d = 2;
            double worst = 0.0;
            for (int fx = 0; fx < d + d * d; ++fx) {
                auto eval = [&](const FramePoint& v) {
                    return fx < d ? v.x[fx] : v.r((fx - d) / d, (fx - d) % d);
                };
                auto field = [&](const FramePoint& v, const Vec& dy) {
                    const TangentAtFrame h = horizontal_field(cyl.manifold, v, dy);
                    return fx < d ? h.dx[fx] : h.dr((fx - d) / d, (fx - d) % d);
                };
                double acc = 0.0;
                for (std::size_t i = 0; i + 1 < driver.size(); ++i) {
                    const Vec dy = driver.continuous_increment(i);
                    const FramePoint& a = u.u[i];
                    const BundleJump* bj = u.jump_at(i + 1);
                    const FramePoint& b = bj ? bj->pre : u.u[i + 1];
                    acc += 0.5 * (field(a, dy) + field(b, dy));
                    if (bj) acc += eval(u.u[i + 1]) - eval(bj->pre);
                }
                worst = std::max(worst, std::abs(eval(u.u.back()) - eval(u.u.front()) - acc));
            }
            mean_residual[static_cast<std::size_t>(level)] += worst / n_seeds;
        }
    }
    const double slope = loglog_slope(steps, mean_residual);
    CHECK(slope >= 0.9);
}

TEST_CASE("transformed fields match the transformed driver") {
    const BuiltManifold sph = build_manifold("sphere:d=2");
    LevyTriplet t = make_triplet(0.4 * Mat::Identity(2, 2), vec2(0.1, -0.2),
                                 make_two_atoms(vec2(0.6, 0.1), 2.0));
    RngStream rng(17, 4);
    const EuclidPath y = sample_levy_path(t, 1.0, 1.0 / 128, rng);
    RngStream grng(55);
    const Mat g = random_gl(2, grng, 0.3);

    MarcusConfig config;
    const BundlePath via_fields = marcus_solve(sph.manifold, y, sph.default_start, config, &g);
    const BundlePath via_driver =
        marcus_solve(sph.manifold, linear_map(y, g), sph.default_start, config);
    REQUIRE(!via_fields.stopped_at);
    REQUIRE(!via_driver.stopped_at);
    REQUIRE(via_fields.t.size() == via_driver.t.size());
    for (std::size_t i = 0; i < via_fields.t.size(); ++i) {
        CHECK(point_distance(sph.manifold,
                             ChartPoint{via_fields.u[i].chart, via_fields.u[i].x},
                             ChartPoint{via_driver.u[i].chart, via_driver.u[i].x}) <= 1e-10);
        if (via_fields.u[i].chart == via_driver.u[i].chart)
            CHECK((via_fields.u[i].r - via_driver.u[i].r).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("cylinder frames stay unimodular") {
    const BuiltManifold cyl = build_manifold("cylinder:alpha=0.5");
    LevyTriplet t = make_triplet(0.5 * Mat::Identity(2, 2), Vec::Zero(2),
                                 make_two_atoms(vec2(0.7, 0.0), 2.0));
    SimulateOptions opts;
    const SimulationResult sim =
        simulate_levy_on_manifold(cyl.manifold, t, cyl.default_start, 1.0, opts, 5, 3);
    REQUIRE(!sim.u.stopped_at);
    for (const FramePoint& u : sim.u.u)
        CHECK(std::abs(u.r.determinant() - 1.0) <= 1e-6);
}

TEST_CASE("stops are recorded, not thrown") {
    const BuiltManifold flat = build_manifold("flat:d=2");
    LevyTriplet runaway = make_continuous_triplet(Mat::Zero(2, 2), vec2(100.0, 0.0));
    SimulateOptions opts;
    opts.marcus.explosion_bound = 10.0;
    const SimulationResult sim =
        simulate_levy_on_manifold(flat.manifold, runaway, flat.default_start, 1.0, opts, 1, 0);
    REQUIRE(sim.u.stopped_at.has_value());
    CHECK(sim.u.stopped_at->reason == StopReason::explosion);
    CHECK(sim.u.t.size() < sim.y.t.size());
    CHECK(sim.x.stopped_at.has_value());

    const BuiltManifold cyl = build_manifold("cylinder:alpha=0.0");
    LevyTriplet updrift = make_continuous_triplet(Mat::Zero(2, 2), vec2(0.0, 150.0));
    SimulateOptions copts;
    const SimulationResult csim =
        simulate_levy_on_manifold(cyl.manifold, updrift, cyl.default_start, 1.0, copts, 1, 0);
    REQUIRE(csim.u.stopped_at.has_value());
    CHECK(csim.u.stopped_at->reason == StopReason::chart_coverage);
}
