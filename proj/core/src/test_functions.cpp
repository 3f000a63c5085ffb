#include "mlevy/gen/generator.hpp"

#include <cmath>
#include <sstream>

namespace mlevy {

namespace {

// Map a point into chart `home`; returns false when no direct transition
// applies (the point is outside the chart's reach).
bool to_home_chart(const ManifoldSpec& m, int home, const ChartPoint& p, Vec& out) {
    if (p.chart == home) {
        out = p.x;
        return true;
    }
    for (const Transition& tr : m.chart(p.chart).neighbors) {
        if (tr.to != home) continue;
        Vec y = tr.map(p.x);
        if (y.allFinite() && m.chart(home).contains(y)) {
            out = std::move(y);
            return true;
        }
    }
    return false;
}

std::vector<double> parse_params(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

} // namespace

TestFunction make_test_function(const ManifoldSpec& m, const std::string& spec) {
    TestFunction f;
    const int home = 0;
    if (spec.rfind("coordinate:", 0) == 0) {
        const int k = std::stoi(spec.substr(11));
        if (k < 0 || k >= m.dim) throw ConfigError("coordinate index out of range");
        f.on_manifold = [&m, k](const ChartPoint& p) {
            Vec y;
            if (!to_home_chart(m, home, p, y))
                throw ChartDomainError("coordinate function evaluated outside chart 0");
            return y[k];
        };
    } else if (spec == "sq_norm") {
        f.on_manifold = [&m](const ChartPoint& p) {
            Vec y;
            if (!to_home_chart(m, home, p, y))
                throw ChartDomainError("sq_norm evaluated outside chart 0");
            return y.squaredNorm();
        };
    } else if (spec.rfind("bump:", 0) == 0) {
        const std::vector<double> params = parse_params(spec.substr(5));
        if (static_cast<int>(params.size()) != m.dim + 1)
            throw ConfigError("bump needs <dim> center coordinates and a width");
        Vec center(m.dim);
        for (int i = 0; i < m.dim; ++i) center[i] = params[static_cast<std::size_t>(i)];
        const double width = params.back();
        if (width <= 0.0) throw ConfigError("bump width must be positive");
        f.on_manifold = [&m, center, width](const ChartPoint& p) {
            Vec y;
            if (!to_home_chart(m, home, p, y)) return 0.0; // outside the bump's chart reach
            const double s = (y - center).squaredNorm() / (width * width);
            if (s >= 1.0) return 0.0;
            return std::exp(1.0 - 1.0 / (1.0 - s));
        };
    } else {
        throw ConfigError("unknown test function: " + spec);
    }
    f.on_frame = [fm = f.on_manifold](const FramePoint& u) {
        return fm(ChartPoint{u.chart, u.x});
    };
    return f;
}

} // namespace mlevy
