#include "mlevy/io/manifold_json.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "mlevy/io/serialize.hpp"

namespace mlevy {

namespace {

struct PolyTerm {
    double coef = 0.0;
    std::vector<int> powers;
};

struct PolyEntry {
    int k = 0, i = 0, j = 0;
    std::vector<PolyTerm> terms;
};

ChristoffelFn poly_christoffel(std::vector<PolyEntry> entries, int dim) {
    return [entries = std::move(entries), dim](const Vec& x, Christoffel& g) {
        for (int k = 0; k < dim; ++k) g[static_cast<std::size_t>(k)].setZero();
        for (const PolyEntry& e : entries) {
            double value = 0.0;
            for (const PolyTerm& t : e.terms) {
                double mono = t.coef;
                for (int a = 0; a < dim; ++a)
                    mono *= std::pow(x[a], t.powers[static_cast<std::size_t>(a)]);
                value += mono;
            }
            g[static_cast<std::size_t>(e.k)](e.i, e.j) = value;
        }
    };
}

} // namespace

BuiltManifold manifold_from_json(const nlohmann::json& doc) {
    BuiltManifold out;
    const int dim = doc.at("dim").get<int>();
    out.manifold.dim = dim;
    out.manifold.name = doc.value("name", std::string("user"));

    for (const auto& cj : doc.at("charts")) {
        Chart c;
        c.id = cj.at("id").get<int>();
        c.dim = dim;
        c.center = vec_from_json(cj.at("center"));
        c.radius = cj.at("radius").get<double>();
        if (cj.contains("neighbors")) {
            for (const auto& nj : cj.at("neighbors")) {
                const Mat linear = nj.contains("linear") ? mat_from_json(nj.at("linear"))
                                                         : Mat::Identity(dim, dim);
                const Vec offset =
                    nj.contains("offset") ? vec_from_json(nj.at("offset")) : Vec::Zero(dim);
                Transition tr;
                tr.to = nj.at("to").get<int>();
                tr.map = [linear, offset](const Vec& x) { return Vec(linear * x + offset); };
                tr.jacobian = [linear](const Vec&) { return linear; };
                c.neighbors.push_back(std::move(tr));
            }
        }
        out.manifold.atlas.push_back(std::move(c));
    }

    const auto& chris = doc.at("christoffel");
    if (chris.is_string()) {
        const std::string ref = chris.get<std::string>();
        if (ref.rfind("builtin:", 0) != 0)
            throw ConfigError("christoffel string must be builtin:<name>");
        BuiltManifold donor = build_manifold(ref.substr(8));
        if (donor.manifold.dim != dim)
            throw ConfigError("builtin christoffel dimension mismatch");
        out.manifold.christoffel.assign(out.manifold.atlas.size(),
                                        donor.manifold.christoffel.at(0));
    } else {
        const auto& per_chart = chris.at("per_chart");
        if (per_chart.size() != out.manifold.atlas.size())
            throw ConfigError("per_chart christoffel table count mismatch");
        for (const auto& table : per_chart) {
            std::vector<PolyEntry> entries;
            for (const auto& ej : table) {
                PolyEntry e;
                e.k = ej.at("k").get<int>();
                e.i = ej.at("i").get<int>();
                e.j = ej.at("j").get<int>();
                for (const auto& tj : ej.at("terms")) {
                    PolyTerm t;
                    t.coef = tj.at("coef").get<double>();
                    t.powers = tj.at("powers").get<std::vector<int>>();
                    if (static_cast<int>(t.powers.size()) != dim)
                        throw ConfigError("polynomial term has wrong power count");
                    e.terms.push_back(std::move(t));
                }
                entries.push_back(std::move(e));
            }
            out.manifold.christoffel.push_back(poly_christoffel(std::move(entries), dim));
        }
    }

    if (doc.contains("holonomy_generators"))
        for (const auto& gj : doc.at("holonomy_generators"))
            out.manifold.holonomy_generators.push_back(mat_from_json(gj));
    out.holonomy.kind = out.manifold.holonomy_generators.empty()
                            ? HolonomySpec::Kind::trivial
                            : HolonomySpec::Kind::dense_cyclic;
    out.holonomy.generators = out.manifold.holonomy_generators;

    out.section = identity_section(out.manifold);
    const Chart& first = out.manifold.atlas.at(0);
    out.default_start = FramePoint{first.id, first.center, Mat::Identity(dim, dim)};
    return out;
}

} // namespace mlevy
