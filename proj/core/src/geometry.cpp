#include "mlevy/geometry/geometry.hpp"

#include <cmath>

namespace mlevy {

namespace {

bool coords_ok(const Vec& x, double bound) {
    return x.allFinite() && x.cwiseAbs().maxCoeff() < bound;
}

} // namespace

void christoffel_contract(const Christoffel& g, const Vec& w, Mat& out) {
    const int d = static_cast<int>(g.size());
    for (int k = 0; k < d; ++k) out.row(k).noalias() = w.transpose() * g[static_cast<std::size_t>(k)];
}

void HorizontalWork::ensure(int dim) {
    if (static_cast<int>(gamma.size()) != dim) gamma = make_christoffel_storage(dim);
    if (contraction.rows() != dim) contraction = Mat::Zero(dim, dim);
    if (w.size() != dim) w = Vec::Zero(dim);
}

void eval_horizontal(const ManifoldSpec& m, int chart, const Vec& x, const Mat& r,
                     const Vec& e, HorizontalWork& work, Vec& dx, Mat& dr) {
    work.ensure(m.dim);
    work.w.noalias() = r * e;
    m.christoffel[static_cast<std::size_t>(chart)](x, work.gamma);
    christoffel_contract(work.gamma, work.w, work.contraction);
    dx = work.w;
    dr.noalias() = -(work.contraction * r);
}

TangentAtFrame horizontal_field(const ManifoldSpec& m, const FramePoint& u, const Vec& e) {
    check_frame_point(m, u);
    HorizontalWork work;
    TangentAtFrame out;
    out.dx = Vec::Zero(m.dim);
    out.dr = Mat::Zero(m.dim, m.dim);
    eval_horizontal(m, u.chart, u.x, u.r, e, work, out.dx, out.dr);
    return out;
}

void check_frame_point(const ManifoldSpec& m, const FramePoint& u) {
    const Chart& c = m.chart(u.chart);
    if (!c.contains(u.x)) throw ChartDomainError("frame base point outside safe region");
    if (std::abs(u.r.determinant()) <= kFrameDetFloor)
        throw ChartDomainError("frame matrix is numerically singular");
}

namespace {

struct GeodesicIntegrator {
    const ManifoldSpec& m;
    double bound;
    Christoffel gamma;
    Mat contraction;
    Vec ax;

    GeodesicIntegrator(const ManifoldSpec& mm, double b)
        : m(mm), bound(b), gamma(make_christoffel_storage(mm.dim)),
          contraction(Mat::Zero(mm.dim, mm.dim)), ax(Vec::Zero(mm.dim)) {}

    void accel(int chart, const Vec& x, const Vec& v, Vec& out) {
        m.christoffel[static_cast<std::size_t>(chart)](x, gamma);
        christoffel_contract(gamma, v, contraction);
        out.noalias() = -(contraction * v);
    }

    // One RK4 step of size h on (x, v); stages stay in the start chart.
    void step(int chart, Vec& x, Vec& v, double h) {
        Vec k1v(m.dim), k2v(m.dim), k3v(m.dim), k4v(m.dim);
        accel(chart, x, v, k1v);
        Vec x2 = x + 0.5 * h * v;
        Vec v2 = v + 0.5 * h * k1v;
        accel(chart, x2, v2, k2v);
        Vec x3 = x + 0.5 * h * v2;
        Vec v3 = v + 0.5 * h * k2v;
        accel(chart, x3, v3, k3v);
        Vec x4 = x + h * v3;
        Vec v4 = v + h * k3v;
        accel(chart, x4, v4, k4v);
        x += (h / 6.0) * (v + 2.0 * v2 + 2.0 * v3 + v4);
        v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
};

} // namespace

GeodesicPath geodesic_path(const ManifoldSpec& m, const ChartPoint& p, const Vec& v,
                           int steps, double explosion_bound) {
    if (steps < 1) throw Error("geodesic_exp: steps must be >= 1");
    if (!m.chart(p.chart).contains(p.x)) throw ChartDomainError("geodesic start outside chart");

    GeodesicIntegrator integ(m, explosion_bound);
    int chart = p.chart;
    Vec x = p.x;
    Vec vel = v;
    GeodesicPath out;
    out.curve.t.reserve(static_cast<std::size_t>(steps) + 2);
    out.curve.p.reserve(static_cast<std::size_t>(steps) + 2);
    out.curve.t.push_back(0.0);
    out.curve.p.push_back(ChartPoint{chart, x});

    const double h = 1.0 / steps;
    for (int i = 0; i < steps; ++i) {
        integ.step(chart, x, vel, h);
        if (!coords_ok(x, explosion_bound) || !vel.allFinite())
            throw ExplosionError("geodesic left the coordinate bound");
        const double t = (i + 1) * h;
        chart = enforce_chart(m, chart, x, [&](const Mat& jac, const Vec& x_pre, int chart_pre) {
            out.curve.t.push_back(t);
            out.curve.p.push_back(ChartPoint{chart_pre, x_pre});
            vel = jac * vel;
        });
        out.curve.t.push_back(t);
        out.curve.p.push_back(ChartPoint{chart, x});
    }
    out.end_velocity = vel;
    return out;
}

ChartPoint geodesic_exp(const ManifoldSpec& m, const ChartPoint& p, const Vec& v,
                        int steps, double explosion_bound) {
    if (steps < 1) throw Error("geodesic_exp: steps must be >= 1");
    if (!m.chart(p.chart).contains(p.x)) throw ChartDomainError("geodesic start outside chart");

    GeodesicIntegrator integ(m, explosion_bound);
    int chart = p.chart;
    Vec x = p.x;
    Vec vel = v;
    const double h = 1.0 / steps;
    for (int i = 0; i < steps; ++i) {
        integ.step(chart, x, vel, h);
        if (!coords_ok(x, explosion_bound) || !vel.allFinite())
            throw ExplosionError("geodesic left the coordinate bound");
        chart = enforce_chart(m, chart, x,
                              [&](const Mat& jac, const Vec&, int) { vel = jac * vel; });
    }
    return ChartPoint{chart, std::move(x)};
}

namespace {

struct FlowIntegrator {
    const ManifoldSpec& m;
    HorizontalWork work;
    Vec dx1, dx2, dx3, dx4;
    Mat dr1, dr2, dr3, dr4;
    Vec xs;
    Mat rs;

    explicit FlowIntegrator(const ManifoldSpec& mm) : m(mm) {
        const int d = mm.dim;
        dx1 = dx2 = dx3 = dx4 = Vec::Zero(d);
        dr1 = dr2 = dr3 = dr4 = Mat::Zero(d, d);
        xs = Vec::Zero(d);
        rs = Mat::Zero(d, d);
    }

    void step(int chart, Vec& x, Mat& r, const Vec& c, double h) {
        eval_horizontal(m, chart, x, r, c, work, dx1, dr1);
        xs = x + 0.5 * h * dx1;
        rs = r + 0.5 * h * dr1;
        eval_horizontal(m, chart, xs, rs, c, work, dx2, dr2);
        xs = x + 0.5 * h * dx2;
        rs = r + 0.5 * h * dr2;
        eval_horizontal(m, chart, xs, rs, c, work, dx3, dr3);
        xs = x + h * dx3;
        rs = r + h * dr3;
        eval_horizontal(m, chart, xs, rs, c, work, dx4, dr4);
        x += (h / 6.0) * (dx1 + 2.0 * dx2 + 2.0 * dx3 + dx4);
        r += (h / 6.0) * (dr1 + 2.0 * dr2 + 2.0 * dr3 + dr4);
    }
};

} // namespace

FramePoint flow_exp(const ManifoldSpec& m, const FramePoint& u, const Vec& c,
                    int steps, double explosion_bound) {
    if (steps < 1) throw Error("flow_exp: steps must be >= 1");
    check_frame_point(m, u);

    FlowIntegrator integ(m);
    int chart = u.chart;
    Vec x = u.x;
    Mat r = u.r;
    const double h = 1.0 / steps;
    for (int i = 0; i < steps; ++i) {
        integ.step(chart, x, r, c, h);
        if (!coords_ok(x, explosion_bound) || !r.allFinite())
            throw ExplosionError("flow left the coordinate bound");
        if (std::abs(r.determinant()) <= kFrameDetFloor)
            throw ExplosionError("frame determinant collapsed during flow");
        chart = enforce_chart(m, chart, x, [&](const Mat& jac, const Vec&, int) { r = jac * r; });
    }
    return FramePoint{chart, std::move(x), std::move(r)};
}

const Transition* find_transition(const ManifoldSpec& m, const ChartPoint& from,
                                  const ChartPoint& to, double tol) {
    const Transition* best = nullptr;
    double best_err = tol * (1.0 + to.x.norm());
    for (const Transition& tr : m.chart(from.chart).neighbors) {
        if (tr.to != to.chart) continue;
        const double err = (tr.map(from.x) - to.x).norm();
        if (err <= best_err) {
            best_err = err;
            best = &tr;
        }
    }
    return best;
}

namespace {

// RK4 on the transport equation r' = -M(x(s)) r over one curve segment with
// linearly interpolated base motion; r_mid comes from a half step so the
// anti-development quadrature can use Simpson.
struct TransportIntegrator {
    const ManifoldSpec& m;
    Christoffel gamma;
    Mat m0, mh, m1;

    explicit TransportIntegrator(const ManifoldSpec& mm)
        : m(mm), gamma(make_christoffel_storage(mm.dim)),
          m0(Mat::Zero(mm.dim, mm.dim)), mh(Mat::Zero(mm.dim, mm.dim)),
          m1(Mat::Zero(mm.dim, mm.dim)) {}

    void slopes(int chart, const Vec& x, const Vec& w, Mat& out) {
        m.christoffel[static_cast<std::size_t>(chart)](x, gamma);
        christoffel_contract(gamma, w, out);
    }

    // Advance r across [x0, x1] with one RK4 step (unit parameter).
    void segment(int chart, const Vec& x0, const Vec& x1, Mat& r) {
        const Vec w = x1 - x0;
        slopes(chart, x0, w, m0);
        slopes(chart, 0.5 * (x0 + x1), w, mh);
        slopes(chart, x1, w, m1);
        const Mat k1 = -(m0 * r);
        const Mat k2 = -(mh * (r + 0.5 * k1));
        const Mat k3 = -(mh * (r + 0.5 * k2));
        const Mat k4 = -(m1 * (r + k3));
        r += (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    }
};

void check_curve(const SampledCurve& curve) {
    if (curve.size() < 1) throw Error("empty curve");
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        if (curve.t[i + 1] < curve.t[i]) throw Error("curve times must be non-decreasing");
        if (curve.t[i + 1] > curve.t[i] && curve.p[i + 1].chart != curve.p[i].chart)
            throw Error("curve changes chart without a duplicate sample");
    }
}

} // namespace

Mat parallel_transport(const ManifoldSpec& m, const SampledCurve& curve, const Mat& r0) {
    check_curve(curve);
    TransportIntegrator integ(m);
    Mat r = r0;
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        const ChartPoint& a = curve.p[i];
        const ChartPoint& b = curve.p[i + 1];
        if (a.chart != b.chart) {
            const Transition* tr = find_transition(m, a, b);
            if (!tr)
                throw ChartCoverageError("curve jump between charts has no atlas transition");
            r = tr->jacobian(a.x) * r;
            continue;
        }
        if (curve.t[i + 1] == curve.t[i] && (a.x - b.x).norm() == 0.0) continue;
        integ.segment(a.chart, a.x, b.x, r);
    }
    return r;
}

FramePath horizontal_lift_smooth(const ManifoldSpec& m, const SampledCurve& curve,
                                 const FramePoint& u0) {
    check_curve(curve);
    if (u0.chart != curve.p.front().chart || (u0.x - curve.p.front().x).norm() > 1e-9)
        throw Error("horizontal_lift_smooth: frame does not sit over the curve start");

    TransportIntegrator integ(m);
    FramePath out;
    out.t = curve.t;
    out.u.reserve(curve.size());
    Mat r = u0.r;
    out.u.push_back(FramePoint{u0.chart, curve.p.front().x, r});
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        const ChartPoint& a = curve.p[i];
        const ChartPoint& b = curve.p[i + 1];
        if (a.chart != b.chart) {
            const Transition* tr = find_transition(m, a, b);
            if (!tr)
                throw ChartCoverageError("curve jump between charts has no atlas transition");
            r = tr->jacobian(a.x) * r;
        } else if (!(curve.t[i + 1] == curve.t[i] && (a.x - b.x).norm() == 0.0)) {
            integ.segment(a.chart, a.x, b.x, r);
        }
        out.u.push_back(FramePoint{b.chart, b.x, r});
    }
    return out;
}

std::vector<Vec> anti_development_smooth(const ManifoldSpec& m, const SampledCurve& curve,
                                         const FramePoint& u0) {
    check_curve(curve);
    if (u0.chart != curve.p.front().chart || (u0.x - curve.p.front().x).norm() > 1e-9)
        throw Error("anti_development_smooth: frame does not sit over the curve start");

    TransportIntegrator integ(m);
    std::vector<Vec> w;
    w.reserve(curve.size());
    Vec acc = Vec::Zero(m.dim);
    w.push_back(acc);
    Mat r = u0.r;
    for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
        const ChartPoint& a = curve.p[i];
        const ChartPoint& b = curve.p[i + 1];
        if (a.chart != b.chart) {
            const Transition* tr = find_transition(m, a, b);
            if (!tr)
                throw ChartCoverageError("curve jump between charts has no atlas transition");
            r = tr->jacobian(a.x) * r;
            w.push_back(acc);
            continue;
        }
        if (curve.t[i + 1] == curve.t[i] && (a.x - b.x).norm() == 0.0) {
            w.push_back(acc);
            continue;
        }
        const Vec dx = b.x - a.x;
        const Vec mid = 0.5 * (a.x + b.x);
        const Mat r_start = r;
        integ.segment(a.chart, a.x, mid, r);
        const Mat r_mid = r;
        integ.segment(a.chart, mid, b.x, r);
        // Simpson in the segment parameter; dx is the constant velocity.
        acc += (r_start.inverse() * dx + 4.0 * (r_mid.inverse() * dx) + r.inverse() * dx) / 6.0;
        w.push_back(acc);
    }
    return w;
}

} // namespace mlevy
