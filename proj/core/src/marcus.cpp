#include "mlevy/marcus/marcus.hpp"

#include <algorithm>
#include <cmath>

namespace mlevy {

void MarcusConfig::validate() const {
    if (diffusion_substeps < 1 || jump_ode_steps < 1 || explosion_bound <= 0.0)
        throw Error("marcus config fields must be positive");
}

const BundleJump* BundlePath::jump_at(std::size_t index) const {
    auto it = std::lower_bound(jumps.begin(), jumps.end(), index,
                               [](const BundleJump& j, std::size_t i) { return j.index < i; });
    return it != jumps.end() && it->index == index ? &*it : nullptr;
}

const ManifoldJump* ManifoldPath::jump_at(std::size_t index) const {
    auto it = std::lower_bound(jumps.begin(), jumps.end(), index,
                               [](const ManifoldJump& j, std::size_t i) { return j.index < i; });
    return it != jumps.end() && it->index == index ? &*it : nullptr;
}

namespace {

// Stepper for the continuous part: Heun predictor-corrector on the frame
// bundle coordinates against a piecewise-linear driver.
struct CellStepper {
    const ManifoldSpec& m;
    double bound;
    HorizontalWork work;
    Vec dx1, dx2;
    Mat dr1, dr2;
    Vec xp;
    Mat rp;

    CellStepper(const ManifoldSpec& mm, double b) : m(mm), bound(b) {
        const int d = mm.dim;
        dx1 = dx2 = xp = Vec::Zero(d);
        dr1 = dr2 = rp = Mat::Zero(d, d);
    }

    void check(const Vec& x, const Mat& r) const {
        if (!x.allFinite() || x.cwiseAbs().maxCoeff() >= bound || !r.allFinite())
            throw ExplosionError("coordinates left the explosion bound");
        if (std::abs(r.determinant()) <= kFrameDetFloor)
            throw ExplosionError("frame determinant collapsed");
    }

    // Advance through one driver cell with increment dy using n Heun steps.
    void cell(int& chart, Vec& x, Mat& r, const Vec& dy, int n) {
        const double h = 1.0 / n;
        for (int i = 0; i < n; ++i) {
            eval_horizontal(m, chart, x, r, dy, work, dx1, dr1);
            xp = x + h * dx1;
            rp = r + h * dr1;
            eval_horizontal(m, chart, xp, rp, dy, work, dx2, dr2);
            x += 0.5 * h * (dx1 + dx2);
            r += 0.5 * h * (dr1 + dr2);
            check(x, r);
            chart = enforce_chart(m, chart, x,
                                  [&](const Mat& jac, const Vec&, int) { r = jac * r; });
        }
    }
};

template <typename RecordPoint, typename RecordJump>
std::optional<StopInfo> run_marcus(const ManifoldSpec& m, const EuclidPath& driver,
                                   const FramePoint& u0, const MarcusConfig& config,
                                   const Mat* field_matrix, RecordPoint&& record_point,
                                   RecordJump&& record_jump) {
    config.validate();
    driver.validate();
    check_frame_point(m, u0);
    if (driver.dim() != m.dim) throw Error("driver dimension does not match the manifold");

    CellStepper stepper(m, config.explosion_bound);
    int chart = u0.chart;
    Vec x = u0.x;
    Mat r = u0.r;
    record_point(0, driver.t[0], chart, x, r);

    for (std::size_t i = 0; i + 1 < driver.size(); ++i) {
        const double t_next = driver.t[i + 1];
        try {
            Vec dy = driver.continuous_increment(i);
            if (field_matrix) dy = (*field_matrix) * dy;
            if (dy.cwiseAbs().maxCoeff() > 0.0)
                stepper.cell(chart, x, r, dy, config.diffusion_substeps);
            if (const PathJump* jump = driver.jump_at(i + 1)) {
                Vec dj = field_matrix ? Vec((*field_matrix) * jump->delta) : jump->delta;
                FramePoint pre{chart, x, r};
                FramePoint post =
                    flow_exp(m, pre, dj, config.jump_ode_steps, config.explosion_bound);
                chart = post.chart;
                x = post.x;
                r = post.r;
                record_jump(i + 1, t_next, pre, post, dj);
            }
        } catch (const ExplosionError& e) {
            return StopInfo{t_next, StopReason::explosion, e.what()};
        } catch (const ChartCoverageError& e) {
            return StopInfo{t_next, StopReason::chart_coverage, e.what()};
        }
        record_point(i + 1, t_next, chart, x, r);
    }
    return std::nullopt;
}

} // namespace

BundlePath marcus_solve(const ManifoldSpec& m, const EuclidPath& driver, const FramePoint& u0,
                        const MarcusConfig& config, const Mat* field_matrix) {
    BundlePath out;
    out.t.reserve(driver.size());
    out.u.reserve(driver.size());
    out.stopped_at = run_marcus(
        m, driver, u0, config, field_matrix,
        [&](std::size_t, double t, int chart, const Vec& x, const Mat& r) {
            out.t.push_back(t);
            out.u.push_back(FramePoint{chart, x, r});
        },
        [&](std::size_t index, double t, FramePoint pre, FramePoint post, Vec dy) {
            out.jumps.push_back(
                BundleJump{index, t, std::move(pre), std::move(post), std::move(dy)});
        });
    return out;
}

TerminalResult marcus_terminal(const ManifoldSpec& m, const EuclidPath& driver,
                               const FramePoint& u0, const MarcusConfig& config) {
    TerminalResult out;
    out.u = u0;
    auto stop = run_marcus(
        m, driver, u0, config, nullptr,
        [&](std::size_t, double, int chart, const Vec& x, const Mat& r) {
            out.u.chart = chart;
            out.u.x = x;
            out.u.r = r;
        },
        [](std::size_t, double, const FramePoint&, const FramePoint&, const Vec&) {});
    out.stopped = stop.has_value();
    return out;
}

ManifoldPath project(const BundlePath& bundle) {
    ManifoldPath out;
    out.t = bundle.t;
    out.p.reserve(bundle.u.size());
    for (const FramePoint& u : bundle.u) out.p.push_back(ChartPoint{u.chart, u.x});
    out.jumps.reserve(bundle.jumps.size());
    for (const BundleJump& j : bundle.jumps)
        out.jumps.push_back(ManifoldJump{j.index, j.t, ChartPoint{j.pre.chart, j.pre.x},
                                         ChartPoint{j.post.chart, j.post.x}, Vec()});
    out.stopped_at = bundle.stopped_at;
    return out;
}

SimulationResult simulate_levy_on_manifold(const ManifoldSpec& m, const LevyTriplet& triplet,
                                           const FramePoint& u0, double horizon,
                                           const SimulateOptions& opts, std::uint64_t seed,
                                           std::uint64_t stream) {
    if (opts.enforce_invariance && !m.holonomy_generators.empty()) {
        const InvarianceReport report = check_invariance(
            triplet, m.holonomy_generators, opts.invariance_n_mc, opts.invariance_tol,
            seed ^ 0x9d2c5680e4b17a33ULL);
        if (!report.pass) {
            std::string what = "triplet fails holonomy invariance for " + m.name + ":";
            for (const ElementInvariance& el : report.elements) {
                if (el.pass) continue;
                what += el.diffusion.pass ? "" : " [a-condition]";
                what += el.measure.pass ? "" : " [nu-condition]";
                what += el.drift.pass ? "" : " [b-condition]";
            }
            throw InvarianceError(what);
        }
    }
    RngStream rng(seed, stream);
    SimulationResult out;
    out.y = sample_levy_path(triplet, horizon, opts.grid_step, rng);
    out.u = marcus_solve(m, out.y, u0, opts.marcus);
    out.x = project(out.u);
    return out;
}

} // namespace mlevy
