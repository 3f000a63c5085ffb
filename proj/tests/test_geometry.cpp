#include "doctest.h"

#include <cmath>

#include "mlevy/manifolds/catalog.hpp"
#include "mlevy/stats.hpp"
#include "test_support.hpp"

using namespace mlevy;
using namespace mlevy::testing;

namespace {

double frob(const Mat& m) { return m.norm(); }

Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

} // namespace

TEST_CASE("christoffel symbols: flat, cylinder, sphere") {
    const BuiltManifold flat = build_manifold("flat:d=3");
    const Christoffel gf = christoffel_at(flat.manifold, 0, Vec::Zero(3));
    for (const Mat& gk : gf) CHECK(gk.cwiseAbs().maxCoeff() == 0.0);

    const double alpha = 0.7;
    const BuiltManifold cyl = build_manifold("cylinder:alpha=0.7");
    const int c0 = cyl.default_start.chart;
    const Christoffel gc = christoffel_at(cyl.manifold, c0, vec2(0.3, -0.2));
    CHECK(gc[0](0, 1) == doctest::Approx(alpha).epsilon(1e-14));  // theta over theta,z
    CHECK(gc[1](0, 0) == doctest::Approx(-alpha).epsilon(1e-14)); // z over theta,theta
    CHECK(std::abs(gc[0](0, 0)) == 0.0);
    CHECK(std::abs(gc[0](1, 0)) == 0.0); // torsion: only (theta,z) order carries alpha
    CHECK(std::abs(gc[1](1, 1)) == 0.0);

    // sphere chart symbols against the finite-difference Levi-Civita oracle
    const BuiltManifold sph = build_manifold("sphere:d=2");
    auto lambda = [](const Vec& x) { return 1.0 / (1.0 + x.squaredNorm() / 4.0); };
    const Christoffel g0 = christoffel_at(sph.manifold, 0, Vec::Zero(2));
    for (const Mat& gk : g0) CHECK(gk.cwiseAbs().maxCoeff() <= 1e-14); // vanishes at center
    RngStream rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        Vec x = vec2(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5));
        const Christoffel got = christoffel_at(sph.manifold, trial % 2, x);
        const Christoffel want = levi_civita_fd(lambda, x);
        for (int k = 0; k < 2; ++k)
            CHECK(frob(got[static_cast<std::size_t>(k)] - want[static_cast<std::size_t>(k)]) <=
                  1e-8);
    }

    CHECK_THROWS_AS(christoffel_at(sph.manifold, 0, vec2(5.0, 0.0)), ChartDomainError);
}

TEST_CASE("geodesic exponential: flat, torus wraparound, sphere antipode") {
    const BuiltManifold flat = build_manifold("flat:d=3");
    RngStream rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const Vec p = rng.gaussian_vec(3);
        const Vec v = rng.gaussian_vec(3);
        const ChartPoint end = geodesic_exp(flat.manifold, ChartPoint{0, p}, v, 64);
        CHECK((end.x - (p + v)).norm() <= 1e-12);
    }

    const BuiltManifold torus = build_manifold("torus:n=2");
    // (0.9, 0.9) lives in the chart centered at (0.75, 0.75)
    const ChartPoint start{3, vec2(0.9, 0.9)};
    const ChartPoint end = geodesic_exp(torus.manifold, start, vec2(0.2, 0.2), 256);
    CHECK(point_distance(torus.manifold, end, ChartPoint{0, vec2(0.1, 0.1)}) <= 1e-12);

    const BuiltManifold sph = build_manifold("sphere:d=2");
    const ChartPoint north{1, Vec::Zero(2)};
    const ChartPoint anti = geodesic_exp(sph.manifold, north, vec2(M_PI, 0.0), 1000);
    CHECK(point_distance(sph.manifold, anti, ChartPoint{0, Vec::Zero(2)}) <= 1e-6);

    // random sphere geodesics against the great-circle closed form
    for (int trial = 0; trial < 10; ++trial) {
        ChartPoint p{0, vec2(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0))};
        const Vec v = rng.gaussian_vec(2);
        const Vec y_oracle = great_circle(sphere_embed(p), sphere_embed_diff(p) * v);
        const ChartPoint got = geodesic_exp(sph.manifold, p, v, 512);
        CHECK((sphere_embed(got) - y_oracle).norm() <= 1e-6);
    }
}

TEST_CASE("horizontal field: linearity, flat, cylinder pattern") {
    const BuiltManifold cyl = build_manifold("cylinder:alpha=1");
    const FramePoint u = cyl.default_start;
    const TangentAtFrame zero = horizontal_field(cyl.manifold, u, Vec::Zero(2));
    CHECK(zero.dx.norm() == 0.0);
    CHECK(zero.dr.norm() == 0.0);

    const BuiltManifold flat = build_manifold("flat:d=2");
    const TangentAtFrame f = horizontal_field(flat.manifold, flat.default_start, vec2(0.3, -1.0));
    CHECK((f.dx - vec2(0.3, -1.0)).norm() == 0.0);
    CHECK(f.dr.norm() == 0.0);

    // alpha = 1, u = ((0,0), I), e = e_theta: dr = [[0,-1],[1,0]]
    const TangentAtFrame h = horizontal_field(cyl.manifold, u, vec2(1.0, 0.0));
    CHECK((h.dx - vec2(1.0, 0.0)).norm() == 0.0);
    Mat want(2, 2);
    want << 0.0, -1.0, 1.0, 0.0;
    CHECK(frob(h.dr - want) <= 1e-14);

    // linearity in e
    RngStream rng(3);
    const Vec e1 = rng.gaussian_vec(2), e2 = rng.gaussian_vec(2);
    const TangentAtFrame t1 = horizontal_field(cyl.manifold, u, e1);
    const TangentAtFrame t2 = horizontal_field(cyl.manifold, u, e2);
    const TangentAtFrame ts = horizontal_field(cyl.manifold, u, e1 + 2.0 * e2);
    CHECK((ts.dx - t1.dx - 2.0 * t2.dx).norm() <= 1e-12);
    CHECK(frob(ts.dr - t1.dr - 2.0 * t2.dr) <= 1e-12);
}

TEST_CASE("flow exponential: identity cases and the projection identity") {
    const BuiltManifold flat = build_manifold("flat:d=2");
    RngStream rng(5);
    const Vec c = rng.gaussian_vec(2);
    Mat r = random_gl(2, rng);
    const FramePoint u{0, vec2(0.4, -0.2), r};
    const FramePoint still = flow_exp(flat.manifold, u, Vec::Zero(2), 8);
    CHECK((still.x - u.x).norm() == 0.0);
    CHECK(frob(still.r - u.r) == 0.0);

    const FramePoint moved = flow_exp(flat.manifold, u, c, 64);
    CHECK((moved.x - (u.x + r * c)).norm() <= 1e-12);
    CHECK(frob(moved.r - r) <= 1e-12);

    for (const char* name : {"sphere:d=2", "cylinder:alpha=0.5"}) {
        const BuiltManifold bm = build_manifold(name);
        for (int trial = 0; trial < 25; ++trial) {
            FramePoint v = bm.default_start;
            v.x += 0.3 * rng.gaussian_vec(2);
            v.r = v.r * random_gl(2, rng, 0.2);
            Vec dir = rng.gaussian_vec(2);
            if (dir.norm() > 1.0) dir.normalize();
            const FramePoint flowed = flow_exp(bm.manifold, v, dir, 1000);
            const ChartPoint geo =
                geodesic_exp(bm.manifold, ChartPoint{v.chart, v.x}, v.r * dir, 1000);
            CHECK(point_distance(bm.manifold, ChartPoint{flowed.chart, flowed.x}, geo) <= 1e-6);
        }
    }
}

TEST_CASE("equivariance of the horizontal field and its flow") {
    RngStream rng(17);
    for (const char* name : {"cylinder:alpha=0.8", "sphere:d=2"}) {
        const BuiltManifold bm = build_manifold(name);
        for (int trial = 0; trial < 100; ++trial) {
            FramePoint u = bm.default_start;
            u.x += 0.3 * rng.gaussian_vec(2);
            u.r = u.r * random_gl(2, rng, 0.2);
            const Vec e = rng.gaussian_vec(2);
            const Mat g = random_gl(2, rng, 0.2);

            FramePoint ug = u;
            ug.r = u.r * g;
            const TangentAtFrame lhs = horizontal_field(bm.manifold, ug, e);
            const TangentAtFrame rhs = horizontal_field(bm.manifold, u, g * e);
            CHECK((lhs.dx - rhs.dx).cwiseAbs().maxCoeff() <= 1e-10);
            CHECK((lhs.dr - rhs.dr * g).cwiseAbs().maxCoeff() <= 1e-10);
        }
        for (int trial = 0; trial < 10; ++trial) {
            FramePoint u = bm.default_start;
            u.x += 0.2 * rng.gaussian_vec(2);
            u.r = u.r * random_gl(2, rng, 0.3);
            Vec e = rng.gaussian_vec(2);
            if (e.norm() > 1.0) e.normalize();
            const Mat g = random_gl(2, rng, 0.3);
            FramePoint ug = u;
            ug.r = u.r * g;
            const FramePoint lhs = flow_exp(bm.manifold, ug, e, 1000);
            FramePoint rhs = flow_exp(bm.manifold, u, g * e, 1000);
            rhs.r = rhs.r * g;
            CHECK(point_distance(bm.manifold, ChartPoint{lhs.chart, lhs.x},
                                 ChartPoint{rhs.chart, rhs.x}) <= 1e-6);
            if (lhs.chart == rhs.chart) CHECK(frob(lhs.r - rhs.r) <= 1e-6);
        }
    }
}

TEST_CASE("flow exponential Taylor remainder has order 2") {
    const BuiltManifold cyl = build_manifold("cylinder:alpha=1");
    RngStream rng(23);
    FramePoint u = cyl.default_start;
    u.x = vec2(0.2, -0.1);
    u.r = random_gl(2, rng, 0.3);
    const Vec dir = rng.unit_direction(2);

    std::vector<double> scales, remainders;
    for (double s = 1e-1; s >= 0.9e-4; s *= 0.5) {
        const Vec c = s * dir;
        const FramePoint flowed = flow_exp(cyl.manifold, u, c, 256);
        const TangentAtFrame h = horizontal_field(cyl.manifold, u, c);
        const double rem = std::sqrt((flowed.x - u.x - h.dx).squaredNorm() +
                                     (flowed.r - u.r - h.dr).squaredNorm());
        scales.push_back(s);
        remainders.push_back(rem);
    }
    const double slope = loglog_slope(scales, remainders);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("parallel transport: constant, cylinder loop, klein flip, torus") {
    const BuiltManifold cyl = build_manifold("cylinder:alpha=0.7");
    SampledCurve constant;
    constant.t = {0.0, 1.0};
    const ChartPoint base{cyl.default_start.chart, Vec::Zero(2)};
    constant.p = {base, base};
    RngStream rng(29);
    const Mat r0 = random_gl(2, rng);
    CHECK(frob(parallel_transport(cyl.manifold, constant, r0) - r0) == 0.0);

    // theta loop: rotation by 2 pi alpha
    const SampledCurve loop = thread_straight(cyl.manifold, base, vec2(2.0 * M_PI, 0.0), 4000);
    const Mat tau = parallel_transport(cyl.manifold, loop, Mat::Identity(2, 2));
    CHECK(frob(tau - rotation2(2.0 * M_PI * 0.7)) <= 1e-6);

    // transport is linear in r0: tau(r0) = tau * r0
    const Mat tr = parallel_transport(cyl.manifold, loop, r0);
    CHECK(frob(tr - tau * r0) <= 1e-10);
    CHECK(std::abs(tau.determinant() - 1.0) <= 1e-9);

    const BuiltManifold klein = build_manifold("klein_bottle:dim=2");
    const ChartPoint kbase{0, vec2(0.5, 0.3)};
    const SampledCurve kloop = thread_straight(klein.manifold, kbase, vec2(0.0, 1.0), 512);
    Mat flip(2, 2);
    flip << -1.0, 0.0, 0.0, 1.0;
    CHECK(frob(parallel_transport(klein.manifold, kloop, Mat::Identity(2, 2)) - flip) <= 1e-8);

    const BuiltManifold torus = build_manifold("torus:n=2");
    for (int dir = 0; dir < 2; ++dir) {
        const ChartPoint tbase{0, vec2(0.2, 0.3)};
        Vec disp = Vec::Zero(2);
        disp[dir] = 1.0;
        const SampledCurve tloop = thread_straight(torus.manifold, tbase, disp, 512);
        CHECK(frob(parallel_transport(torus.manifold, tloop, Mat::Identity(2, 2)) -
                   Mat::Identity(2, 2)) <= 1e-8);
    }
}

TEST_CASE("smooth lift and anti-development") {
    const BuiltManifold torus = build_manifold("torus:n=2");
    const ChartPoint base{0, vec2(0.2, 0.3)};
    SampledCurve constant;
    constant.t = {0.0, 0.5, 1.0};
    constant.p = {base, base, base};
    const FramePoint u0{0, base.x, Mat::Identity(2, 2)};
    const FramePath still = horizontal_lift_smooth(torus.manifold, constant, u0);
    CHECK(frob(still.u.back().r - u0.r) == 0.0);
    const std::vector<Vec> w0 = anti_development_smooth(torus.manifold, constant, u0);
    CHECK(w0.back().norm() == 0.0);

    // flat case: w recovers r0^{-1} (gamma_t - gamma_0)
    const BuiltManifold flat = build_manifold("flat:d=2");
    RngStream rng(31);
    const Mat r0 = random_gl(2, rng);
    SampledCurve wiggle;
    for (int i = 0; i <= 100; ++i) {
        const double t = i / 100.0;
        wiggle.t.push_back(t);
        wiggle.p.push_back(ChartPoint{0, vec2(std::sin(t), t * t - 0.3 * t)});
    }
    const FramePoint uf{0, wiggle.p.front().x, r0};
    const std::vector<Vec> w = anti_development_smooth(flat.manifold, wiggle, uf);
    const Vec expect = r0.inverse() * (wiggle.p.back().x - wiggle.p.front().x);
    CHECK((w.back() - expect).norm() <= 1e-12);

    // anti-development of a geodesic is uniform motion
    const BuiltManifold sph = build_manifold("sphere:d=2");
    const Vec e = vec2(0.6, -0.4);
    FramePoint us = sph.default_start;
    const GeodesicPath geo = geodesic_path(sph.manifold, ChartPoint{us.chart, us.x}, us.r * e, 512);
    const std::vector<Vec> wg = anti_development_smooth(sph.manifold, geo.curve, us);
    for (std::size_t i = 0; i < geo.curve.size(); i += 64)
        CHECK((wg[i] - geo.curve.t[i] * e).norm() <= 1e-6);

    // torus loop: lift ends with the starting frame
    const SampledCurve tloop = thread_straight(torus.manifold, base, vec2(1.0, 0.0), 512);
    const FramePath lifted = horizontal_lift_smooth(torus.manifold, tloop, u0);
    CHECK(frob(lifted.u.back().r - u0.r) <= 1e-8);
}

TEST_CASE("chart transitions carry points and frames") {
    const BuiltManifold torus = build_manifold("torus:n=1");
    // wraparound: x = 0.98 sits in the chart centered at 0.75
    Vec x(1);
    x << 0.98;
    const ChartPoint moved = chart_transition(torus.manifold, ChartPoint{1, x}, 0);
    CHECK(moved.x[0] == doctest::Approx(-0.02).epsilon(1e-14));

    // klein w-step flips the first block
    const BuiltManifold klein = build_manifold("klein_bottle:dim=2");
    const FramePoint kf{0, vec2(0.3, 0.6), Mat::Identity(2, 2)};
    const FramePoint kmoved = chart_transition(klein.manifold, kf, 2); // chart above
    CHECK(kmoved.r(0, 0) == doctest::Approx(1.0)); // identity deck move upward
    bool found_flip = false;
    for (const Transition& tr : klein.manifold.atlas[0].neighbors) {
        const Mat j = tr.jacobian(kf.x);
        if (j(0, 0) == -1.0 && j(1, 1) == 1.0) found_flip = true;
    }
    CHECK(found_flip);

    // sphere: jacobian of the inversion equals its numerical derivative
    const BuiltManifold sph = build_manifold("sphere:d=2");
    RngStream rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const Vec p = 1.5 * rng.unit_direction(2) + vec2(0.2, 0.0);
        const Transition& tr = sph.manifold.atlas[0].neighbors[0];
        Mat fd(2, 2);
        const double h = 1e-6;
        for (int i = 0; i < 2; ++i) {
            Vec pp = p, pm = p;
            pp[i] += h;
            pm[i] -= h;
            fd.col(i) = (tr.map(pp) - tr.map(pm)) / (2.0 * h);
        }
        CHECK(frob(tr.jacobian(p) - fd) <= 1e-6);
        // transitions are mutually inverse
        const Transition& back = sph.manifold.atlas[1].neighbors[0];
        CHECK((back.map(tr.map(p)) - p).norm() <= 1e-10);
    }

    CHECK_THROWS_AS(chart_transition(sph.manifold, ChartPoint{0, vec2(2.0, 0.0)}, 5),
                    NoTransitionError);
}

TEST_CASE("explosion and coverage errors surface") {
    // geodesics on the cylinder leave the finite z-range of the atlas
    const BuiltManifold cyl = build_manifold("cylinder:alpha=0.0");
    const ChartPoint base{cyl.default_start.chart, Vec::Zero(2)};
    CHECK_THROWS_AS(geodesic_exp(cyl.manifold, base, vec2(0.0, 500.0), 256), ChartCoverageError);

    const BuiltManifold flat = build_manifold("flat:d=2");
    CHECK_THROWS_AS(
        geodesic_exp(flat.manifold, ChartPoint{0, Vec::Zero(2)}, vec2(2e6, 0.0), 16, 1e6),
        ExplosionError);
}
