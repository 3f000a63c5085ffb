#include "mlevy/geometry/chart.hpp"

#include <algorithm>
#include <limits>

namespace mlevy {

const Chart& ManifoldSpec::chart(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= atlas.size())
        throw ChartDomainError("chart id " + std::to_string(id) + " not in atlas of " + name);
    return atlas[static_cast<std::size_t>(id)];
}

Christoffel make_christoffel_storage(int dim) {
    return Christoffel(static_cast<std::size_t>(dim), Mat::Zero(dim, dim));
}

Christoffel christoffel_at(const ManifoldSpec& m, int chart, const Vec& x) {
    const Chart& c = m.chart(chart);
    if (!c.contains(x))
        throw ChartDomainError("point outside safe region of chart " + std::to_string(chart));
    Christoffel g = make_christoffel_storage(m.dim);
    m.christoffel[static_cast<std::size_t>(chart)](x, g);
    return g;
}

ChartPoint chart_transition(const ManifoldSpec& m, const ChartPoint& from, int to_chart) {
    const Chart& c = m.chart(from.chart);
    for (const Transition& tr : c.neighbors) {
        if (tr.to != to_chart) continue;
        Vec y = tr.map(from.x);
        if (m.chart(to_chart).contains(y)) return ChartPoint{to_chart, std::move(y)};
    }
    throw NoTransitionError("no transition from chart " + std::to_string(from.chart) + " to " +
                            std::to_string(to_chart) + " at the given point");
}

FramePoint chart_transition(const ManifoldSpec& m, const FramePoint& from, int to_chart) {
    const Chart& c = m.chart(from.chart);
    for (const Transition& tr : c.neighbors) {
        if (tr.to != to_chart) continue;
        Vec y = tr.map(from.x);
        if (!m.chart(to_chart).contains(y)) continue;
        Mat jac = tr.jacobian(from.x);
        return FramePoint{to_chart, std::move(y), jac * from.r};
    }
    throw NoTransitionError("no transition from chart " + std::to_string(from.chart) + " to " +
                            std::to_string(to_chart) + " at the given point");
}

int enforce_chart(const ManifoldSpec& m, int chart, Vec& x, const ChartSwitchHook& on_jacobian) {
    for (int round = 0; round < 8; ++round) {
        const Chart& c = m.chart(chart);
        const double own = c.margin(x);
        if (own > 0.2 * c.radius) return chart;

        int best = -1;
        double best_margin = own;
        Vec best_x;
        const Transition* best_tr = nullptr;
        for (const Transition& tr : c.neighbors) {
            Vec y = tr.map(x);
            const double mg = m.chart(tr.to).margin(y);
            if (mg <= 0.0) continue;
            if (mg > best_margin + 1e-15 ||
                (std::abs(mg - best_margin) <= 1e-15 && best >= 0 && tr.to < best)) {
                best = tr.to;
                best_margin = mg;
                best_x = std::move(y);
                best_tr = &tr;
            }
        }
        if (best < 0) {
            if (own > 0.0) return chart; // still covered, nowhere better to go
            throw ChartCoverageError("no chart of " + m.name + " covers the current point");
        }
        if (on_jacobian) on_jacobian(best_tr->jacobian(x), x, chart);
        x = std::move(best_x);
        chart = best;
    }
    return chart;
}

double point_distance(const ManifoldSpec& m, const ChartPoint& a, const ChartPoint& b) {
    if (a.chart == b.chart) return (a.x - b.x).norm();
    double best = std::numeric_limits<double>::infinity();
    for (const Transition& tr : m.chart(a.chart).neighbors) {
        if (tr.to != b.chart) continue;
        best = std::min(best, (tr.map(a.x) - b.x).norm());
    }
    for (const Transition& tr : m.chart(b.chart).neighbors) {
        if (tr.to != a.chart) continue;
        best = std::min(best, (tr.map(b.x) - a.x).norm());
    }
    return best;
}

bool same_point(const ManifoldSpec& m, const ChartPoint& a, const ChartPoint& b, double tol) {
    return point_distance(m, a, b) <= tol;
}

} // namespace mlevy
