#include "mlevy/lift/lift.hpp"

#include <cmath>

namespace mlevy {

namespace {

// Re-express (point, frame) in the chart of `target`; identity when charts
// already agree. Throws when the atlas has no direct arrow.
void align_to_chart(const ManifoldSpec& m, int target_chart, int& chart, Vec& x, Mat& r) {
    if (chart == target_chart) return;
    FramePoint moved = chart_transition(m, FramePoint{chart, x, r}, target_chart);
    chart = moved.chart;
    x = std::move(moved.x);
    r = std::move(moved.r);
}

// Heun step of the transport equation across one path cell, matching the
// order of the forward scheme so round-trip errors cancel at leading order.
struct CellTransport {
    const ManifoldSpec& m;
    Christoffel gamma;
    Mat m0, m1, pred;

    explicit CellTransport(const ManifoldSpec& mm)
        : m(mm), gamma(make_christoffel_storage(mm.dim)), m0(Mat::Zero(mm.dim, mm.dim)),
          m1(Mat::Zero(mm.dim, mm.dim)), pred(Mat::Zero(mm.dim, mm.dim)) {}

    void advance(int chart, const Vec& x0, const Vec& x1, Mat& r) {
        const Vec w = x1 - x0;
        if (w.cwiseAbs().maxCoeff() == 0.0) return;
        m.christoffel[static_cast<std::size_t>(chart)](x0, gamma);
        christoffel_contract(gamma, w, m0);
        m.christoffel[static_cast<std::size_t>(chart)](x1, gamma);
        christoffel_contract(gamma, w, m1);
        pred.noalias() = r - m0 * r;
        r -= 0.5 * (m0 * r + m1 * pred);
    }
};

} // namespace

void validate_jump_data(const ManifoldSpec& m, const ManifoldPath& x, const JumpData& jd,
                        const SectionSpec& q, const LiftConfig& config) {
    for (const ManifoldJump& rec : x.jumps) {
        const JumpEntry* entry = jd.at_time(rec.t);
        if (!entry)
            throw JumpMismatchError("path jumps at t = " + std::to_string(rec.t) +
                                    " but the jump data has no entry there");
        const Mat q_pre = section_frame(m, q, rec.pre);
        const ChartPoint landed =
            geodesic_exp(m, rec.pre, q_pre * entry->j, config.geodesic_check_steps,
                         config.explosion_bound);
        const double err = point_distance(m, landed, rec.post);
        if (!(err <= config.jump_tol))
            throw JumpMismatchError("jump entry at t = " + std::to_string(rec.t) +
                                    " does not reproduce the path jump (error " +
                                    std::to_string(err) + ")");
    }
    for (const JumpEntry& e : jd.entries) {
        bool matched = false;
        for (const ManifoldJump& rec : x.jumps) matched = matched || rec.t == e.t;
        if (matched) continue;
        // entry at a quiet time: the geodesic must loop back
        std::size_t idx = x.t.size();
        for (std::size_t i = 0; i < x.t.size(); ++i)
            if (x.t[i] == e.t) idx = i;
        if (idx == x.t.size() || idx == 0)
            throw JumpMismatchError("jump entry at t = " + std::to_string(e.t) +
                                    " is not on the path grid");
        const ChartPoint& p = x.p[idx];
        const Mat q_pre = section_frame(m, q, p);
        const ChartPoint landed = geodesic_exp(m, p, q_pre * e.j,
                                               config.geodesic_check_steps,
                                               config.explosion_bound);
        const double err = point_distance(m, landed, p);
        if (!(err <= config.jump_tol))
            throw JumpMismatchError("quiet-time jump entry at t = " + std::to_string(e.t) +
                                    " does not loop back to the path point");
    }
}

BundlePath reconstruct_lift(const ManifoldSpec& m, const ManifoldPath& x, const JumpData& jd,
                            const SectionSpec& q, const FramePoint& u0,
                            const LiftConfig& config) {
    if (x.t.empty()) throw Error("reconstruct_lift: empty path");
    validate_jump_data(m, x, jd, q, config);

    int chart = u0.chart;
    Vec base = u0.x;
    Mat r = u0.r;
    align_to_chart(m, x.p[0].chart, chart, base, r);
    if ((base - x.p[0].x).norm() > 1e-8)
        throw Error("reconstruct_lift: initial frame does not sit over the path start");

    CellTransport transport(m);
    BundlePath out;
    out.t = x.t;
    out.stopped_at = x.stopped_at;
    out.u.reserve(x.t.size());
    out.u.push_back(FramePoint{x.p[0].chart, x.p[0].x, r});

    for (std::size_t i = 0; i + 1 < x.t.size(); ++i) {
        const ManifoldJump* rec = x.jump_at(i + 1);
        const JumpEntry* entry = jd.at_time(x.t[i + 1]);
        const ChartPoint& target = x.p[i + 1];
        const ChartPoint& pre_point = rec ? rec->pre : target;

        int cchart = x.p[i].chart;
        Vec cx = x.p[i].x;
        align_to_chart(m, pre_point.chart, cchart, cx, r);
        transport.advance(cchart, cx, pre_point.x, r);

        if (entry) {
            const FramePoint pre_frame{pre_point.chart, pre_point.x, r};
            const Mat q_pre = section_frame(m, q, pre_point);
            const Vec c = pre_frame.r.inverse() * (q_pre * entry->j);
            FramePoint post =
                flow_exp(m, pre_frame, c, config.jump_ode_steps, config.explosion_bound);
            int pchart = post.chart;
            Vec px = post.x;
            Mat pr = post.r;
            align_to_chart(m, target.chart, pchart, px, pr);
            if ((px - target.x).norm() > 10.0 * config.jump_tol + 1e-9)
                throw JumpMismatchError("reconstructed jump landed away from the path");
            r = std::move(pr);
            out.jumps.push_back(BundleJump{i + 1, x.t[i + 1], pre_frame,
                                           FramePoint{target.chart, target.x, r}, c});
        } else {
            align_to_chart(m, target.chart, cchart, cx, r);
        }
        out.u.push_back(FramePoint{target.chart, target.x, r});
    }
    return out;
}

EuclidPath reconstruct_antidev(const ManifoldSpec& m, const ManifoldPath& x,
                               const BundlePath& lift, const JumpData& jd,
                               const SectionSpec& q) {
    (void)jd;
    (void)q;
    if (lift.t.size() != x.t.size())
        throw Error("reconstruct_antidev: lift and path grids disagree");
    const int d = m.dim;
    EuclidPath w;
    w.t = x.t;
    w.values.resize(x.t.size());
    w.regular_index.resize(x.t.size());
    for (std::size_t i = 0; i < x.t.size(); ++i)
        w.regular_index[i] = static_cast<std::int64_t>(i);
    w.values[0] = Vec::Zero(d);

    for (std::size_t i = 0; i + 1 < x.t.size(); ++i) {
        const BundleJump* jump = lift.jump_at(i + 1);
        // frame just before t_{i+1}
        const FramePoint& pre = jump ? jump->pre : lift.u[i + 1];

        int cchart = lift.u[i].chart;
        Vec cx = lift.u[i].x;
        Mat cr = lift.u[i].r;
        align_to_chart(m, pre.chart, cchart, cx, cr);

        const Vec dx = pre.x - cx;
        Vec inc = 0.5 * (cr.inverse() * dx + pre.r.inverse() * dx);
        if (jump) {
            inc += jump->dy;
            w.jumps.push_back(PathJump{i + 1, x.t[i + 1], jump->dy});
        }
        w.values[i + 1] = w.values[i] + inc;
    }
    return w;
}

JumpData jump_data_from_simulation(const ManifoldSpec& m, const ManifoldPath& x,
                                   const BundlePath& u, const EuclidPath& y,
                                   const SectionSpec& q) {
    (void)x;
    JumpData out;
    out.section_id = q.id;
    for (const PathJump& jump : y.jumps) {
        const BundleJump* rec = u.jump_at(jump.index);
        if (!rec) continue; // stopped before this jump
        const ChartPoint pre_point{rec->pre.chart, rec->pre.x};
        const Mat q_pre = section_frame(m, q, pre_point);
        JumpEntry e;
        e.t = jump.t;
        e.j = q_pre.inverse() * (rec->pre.r * jump.delta);
        out.entries.push_back(std::move(e));
    }
    return out;
}

} // namespace mlevy
