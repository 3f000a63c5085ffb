#include "mlevy/io/serialize.hpp"

namespace mlevy {

nlohmann::json vec_to_json(const Vec& v) {
    auto arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
    return arr;
}

nlohmann::json mat_to_json(const Mat& m) {
    auto rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        auto row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Vec vec_from_json(const nlohmann::json& j) {
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
    return v;
}

Mat mat_from_json(const nlohmann::json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j.at(0).size());
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index k = 0; k < cols; ++k)
            m(i, k) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>();
    return m;
}

namespace {

void write_stop(nlohmann::json& rec, const std::optional<StopInfo>& stop, double t) {
    if (stop && stop->time == t) {
        rec["stopped"] = nlohmann::json{
            {"reason", stop->reason == StopReason::explosion ? "explosion" : "chart_coverage"}};
    }
}

} // namespace

void write_bundle_jsonl(std::ostream& os, const BundlePath& u, std::size_t path_index) {
    for (std::size_t i = 0; i < u.t.size(); ++i) {
        nlohmann::json rec{{"t", u.t[i]},
                           {"path", path_index},
                           {"layer", "U"},
                           {"chart", u.u[i].chart},
                           {"x", vec_to_json(u.u[i].x)},
                           {"r", mat_to_json(u.u[i].r)}};
        if (const BundleJump* j = u.jump_at(i)) {
            rec["jump"] = nlohmann::json{{"dy", vec_to_json(j->dy)},
                                         {"pre_chart", j->pre.chart},
                                         {"pre_x", vec_to_json(j->pre.x)},
                                         {"pre_r", mat_to_json(j->pre.r)}};
        }
        write_stop(rec, u.stopped_at, u.t[i]);
        os << rec.dump() << '\n';
    }
}

void write_manifold_jsonl(std::ostream& os, const ManifoldPath& x, std::size_t path_index) {
    for (std::size_t i = 0; i < x.t.size(); ++i) {
        nlohmann::json rec{{"t", x.t[i]},
                           {"path", path_index},
                           {"layer", "X"},
                           {"chart", x.p[i].chart},
                           {"x", vec_to_json(x.p[i].x)}};
        if (const ManifoldJump* j = x.jump_at(i)) {
            nlohmann::json jump{{"pre_chart", j->pre.chart},
                                {"pre_x", vec_to_json(j->pre.x)}};
            if (j->jump_vector.size() > 0) jump["J"] = vec_to_json(j->jump_vector);
            rec["jump"] = std::move(jump);
        }
        write_stop(rec, x.stopped_at, x.t[i]);
        os << rec.dump() << '\n';
    }
}

void write_euclid_jsonl(std::ostream& os, const EuclidPath& y, std::size_t path_index,
                        const std::string& layer) {
    for (std::size_t i = 0; i < y.t.size(); ++i) {
        nlohmann::json rec{
            {"t", y.t[i]}, {"path", path_index}, {"layer", layer}, {"x", vec_to_json(y.values[i])}};
        if (const PathJump* j = y.jump_at(i)) rec["jump"] = {{"delta", vec_to_json(j->delta)}};
        os << rec.dump() << '\n';
    }
}

namespace {

void csv_row(std::ostream& os, double t, std::size_t path, const std::string& layer, int chart,
             const Vec& x) {
    os << t << ',' << path << ',' << layer << ',' << chart;
    for (Eigen::Index i = 0; i < x.size(); ++i) os << ',' << x[i];
    os << '\n';
}

} // namespace

void write_manifold_csv(std::ostream& os, const ManifoldPath& x, std::size_t path_index,
                        bool header) {
    if (header) {
        os << "t,path,layer,chart";
        for (Eigen::Index i = 0; i < x.p.front().x.size(); ++i) os << ",x" << i;
        os << '\n';
    }
    for (std::size_t i = 0; i < x.t.size(); ++i)
        csv_row(os, x.t[i], path_index, "X", x.p[i].chart, x.p[i].x);
}

void write_euclid_csv(std::ostream& os, const EuclidPath& y, std::size_t path_index,
                      const std::string& layer, bool header) {
    if (header) {
        os << "t,path,layer,chart";
        for (Eigen::Index i = 0; i < y.values.front().size(); ++i) os << ",x" << i;
        os << '\n';
    }
    for (std::size_t i = 0; i < y.t.size(); ++i)
        csv_row(os, y.t[i], path_index, layer, -1, y.values[i]);
}

} // namespace mlevy
