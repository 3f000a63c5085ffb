#include "mlevy/lift/lift.hpp"

#include <nlohmann/json.hpp>

namespace mlevy {

SectionSpec identity_section(const ManifoldSpec& m) {
    SectionSpec q;
    q.id = "identity";
    q.priority.resize(m.atlas.size());
    for (std::size_t i = 0; i < m.atlas.size(); ++i) q.priority[i] = static_cast<int>(i);
    const int d = m.dim;
    q.frame = [d](int, const Vec&) { return Mat::Identity(d, d); };
    return q;
}

Mat section_frame(const ManifoldSpec& m, const SectionSpec& q, const ChartPoint& at) {
    for (int c : q.priority) {
        if (c == at.chart) return q.frame(c, at.x);

        // find the best re-expression of the point in the priority chart
        const Transition* fwd = nullptr;
        Vec y;
        double best_margin = 0.0;
        for (const Transition& tr : m.chart(at.chart).neighbors) {
            if (tr.to != c) continue;
            Vec cand = tr.map(at.x);
            const double mg = m.chart(c).margin(cand);
            if (mg > best_margin) {
                best_margin = mg;
                y = std::move(cand);
                fwd = &tr;
            }
        }
        if (!fwd) continue;

        const Mat frame_there = q.frame(c, y);
        // express in the basis of the chart the caller handed us
        for (const Transition& back : m.chart(c).neighbors) {
            if (back.to != at.chart) continue;
            if ((back.map(y) - at.x).norm() > 1e-8 * (1.0 + at.x.norm())) continue;
            return back.jacobian(y) * frame_there;
        }
        throw NoTransitionError("section chart has no inverse transition to chart " +
                                std::to_string(at.chart));
    }
    throw ChartCoverageError("no section chart covers the requested point");
}

const JumpEntry* JumpData::at_time(double t) const {
    for (const JumpEntry& e : entries)
        if (e.t == t) return &e;
    return nullptr;
}

double JumpData::sum_squares() const {
    double s = 0.0;
    for (const JumpEntry& e : entries) s += e.j.squaredNorm();
    return s;
}

void to_json(nlohmann::json& j, const JumpData& jd) {
    auto arr = nlohmann::json::array();
    for (const JumpEntry& e : jd.entries) {
        std::vector<double> v(e.j.data(), e.j.data() + e.j.size());
        arr.push_back({{"s", e.t}, {"J", v}});
    }
    j = nlohmann::json{{"section", jd.section_id}, {"entries", std::move(arr)}};
}

void from_json(const nlohmann::json& j, JumpData& jd) {
    jd.section_id = j.at("section").get<std::string>();
    jd.entries.clear();
    for (const auto& e : j.at("entries")) {
        auto v = e.at("J").get<std::vector<double>>();
        JumpEntry entry;
        entry.t = e.at("s").get<double>();
        entry.j = Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size()));
        jd.entries.push_back(std::move(entry));
    }
}

} // namespace mlevy
