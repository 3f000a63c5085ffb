#include "mlevy/manifolds/catalog.hpp"

#include <cmath>

namespace mlevy {

std::string HolonomySpec::describe() const {
    switch (kind) {
        case Kind::trivial: return "trivial";
        case Kind::finite_cyclic: return "finite_cyclic(" + std::to_string(cyclic_order) + ")";
        case Kind::z2_reflection: return "Z2_reflection";
        case Kind::special_orthogonal: return "SO(d)";
        case Kind::dense_cyclic: return "dense_cyclic(" + std::to_string(alpha) + ")";
    }
    return "?";
}

void HolonomySpec::validate(int dim) const {
    for (const Mat& g : generators) {
        if (g.rows() != dim || g.cols() != dim)
            throw Error("holonomy generator has wrong dimension");
        if (std::abs(g.determinant()) < 1e-12)
            throw Error("holonomy generator is singular");
    }
    if (kind == Kind::special_orthogonal || kind == Kind::dense_cyclic) return;

    // enumerate the generated group up to 64 elements
    std::vector<Mat> elems;
    elems.push_back(Mat::Identity(dim, dim));
    auto known = [&](const Mat& g) {
        for (const Mat& e : elems)
            if ((e - g).cwiseAbs().maxCoeff() < 1e-8) return true;
        return false;
    };
    bool grew = true;
    while (grew && elems.size() <= 64) {
        grew = false;
        for (std::size_t i = 0; i < elems.size(); ++i) {
            for (const Mat& g : generators) {
                const Mat prod = elems[i] * g;
                if (!known(prod)) {
                    elems.push_back(prod);
                    grew = true;
                }
            }
        }
    }
    std::size_t expected = 0;
    switch (kind) {
        case Kind::trivial: expected = 1; break;
        case Kind::z2_reflection: expected = 2; break;
        case Kind::finite_cyclic: expected = static_cast<std::size_t>(cyclic_order); break;
        default: return;
    }
    if (elems.size() != expected)
        throw Error("holonomy closure has " + std::to_string(elems.size()) +
                    " elements, description says " + std::to_string(expected));
}

SampledCurve thread_straight(const ManifoldSpec& m, const ChartPoint& start,
                             const Vec& displacement, int samples) {
    if (samples < 1) throw Error("thread_straight: samples must be >= 1");
    SampledCurve curve;
    curve.t.reserve(static_cast<std::size_t>(samples) + 4);
    curve.p.reserve(curve.t.capacity());
    curve.t.push_back(0.0);
    curve.p.push_back(start);

    int chart = start.chart;
    Vec x = start.x;
    Vec step = displacement / samples;
    for (int i = 1; i <= samples; ++i) {
        const double t = static_cast<double>(i) / samples;
        x += step;
        chart = enforce_chart(m, chart, x, [&](const Mat& jac, const Vec& x_pre, int chart_pre) {
            curve.t.push_back(t);
            curve.p.push_back(ChartPoint{chart_pre, x_pre});
            step = jac * step;
        });
        curve.t.push_back(t);
        curve.p.push_back(ChartPoint{chart, x});
    }
    return curve;
}

LoopFamily coordinate_loops(const ManifoldSpec& m, const ChartPoint& base, int dir,
                            double period, int samples) {
    return [&m, base, dir, period, samples](int k) {
        Vec disp = Vec::Zero(m.dim);
        disp[dir] = period * k;
        if (k == 0) {
            SampledCurve constant;
            constant.t = {0.0, 1.0};
            constant.p = {base, base};
            return constant;
        }
        return thread_straight(m, base, disp, samples * std::abs(k));
    };
}

namespace {

// Append `piece` to `curve`, rescaling its time axis onto [t0, t1].
void append_curve(SampledCurve& curve, const SampledCurve& piece, double t0, double t1) {
    const double span = piece.t.back() - piece.t.front();
    for (std::size_t i = curve.size() ? 1 : 0; i < piece.size(); ++i) {
        const double s = span > 0.0 ? (piece.t[i] - piece.t.front()) / span : 0.0;
        curve.t.push_back(t0 + s * (t1 - t0));
        curve.p.push_back(piece.p[i]);
    }
}

} // namespace

SampledCurve sphere_octant_loop(const ManifoldSpec& m, int steps_per_edge, bool clockwise) {
    if (m.dim != 2) throw Error("sphere_octant_loop is a sphere(2) probe");
    ChartPoint p{0, Vec(2)};
    p.x << 2.0, 0.0; // on the equator
    Vec v(2);
    v << 0.0, M_PI; // quarter arc per unit time (conformal factor 1/2 here)
    if (clockwise) v = -v;

    SampledCurve curve;
    curve.t.push_back(0.0);
    curve.p.push_back(p);
    const Mat turn = rotation2(clockwise ? M_PI / 2.0 : -M_PI / 2.0);
    for (int edge = 0; edge < 3; ++edge) {
        GeodesicPath leg = geodesic_path(m, p, v, steps_per_edge);
        append_curve(curve, leg.curve, edge / 3.0, (edge + 1) / 3.0);
        p = leg.curve.p.back();
        v = turn * leg.end_velocity;
    }
    // close the loop in the starting chart when the last sample sits in the
    // other stereographic chart
    const ChartPoint& last = curve.p.back();
    const ChartPoint& first = curve.p.front();
    if (last.chart != first.chart) {
        const Transition* tr = find_transition(m, last, first, 1e-5);
        if (!tr) throw ChartCoverageError("octant loop failed to close");
        curve.t.push_back(1.0);
        curve.p.push_back(first);
    }
    return curve;
}

std::vector<Mat> holonomy_estimate(const ManifoldSpec& m, const ChartPoint& base,
                                   const LoopFamily& loops, int n_loops) {
    std::vector<Mat> out;
    out.reserve(static_cast<std::size_t>(n_loops));
    const Mat eye = Mat::Identity(m.dim, m.dim);
    for (int k = 0; k < n_loops; ++k) {
        const SampledCurve loop = loops(k);
        if (!same_point(m, loop.p.front(), base, 1e-6))
            throw Error("holonomy loop is not based at the requested point");
        if (!same_point(m, loop.p.back(), loop.p.front(), 1e-6))
            throw Error("holonomy probe needs closed loops");
        out.push_back(parallel_transport(m, loop, eye));
    }
    return out;
}

} // namespace mlevy
