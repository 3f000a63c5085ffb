#include "mlevy/manifolds/catalog.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace mlevy {

namespace {

struct NameParams {
    std::string base;
    std::map<std::string, double> params;
};

NameParams parse_name(const std::string& name) {
    NameParams out;
    const auto colon = name.find(':');
    out.base = name.substr(0, colon);
    if (colon == std::string::npos) return out;
    const std::string rest = name.substr(colon + 1);
    if (out.base == "lie") {
        out.params.clear();
        out.base = "lie:" + rest;
        return out;
    }
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UnknownManifoldError("bad parameter: " + item);
        out.params[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    }
    return out;
}

double get_param(const NameParams& np, const std::string& key, double fallback) {
    auto it = np.params.find(key);
    return it == np.params.end() ? fallback : it->second;
}

ChristoffelFn zero_christoffel(int dim) {
    return [dim](const Vec&, Christoffel& out) {
        for (int k = 0; k < dim; ++k) out[static_cast<std::size_t>(k)].setZero();
    };
}

Transition affine_transition(int to, const Mat& linear, const Vec& offset) {
    Transition tr;
    tr.to = to;
    tr.map = [linear, offset](const Vec& x) { return Vec(linear * x + offset); };
    tr.jacobian = [linear](const Vec&) { return linear; };
    return tr;
}

// ---- flat space ----

BuiltManifold build_flat(int d) {
    BuiltManifold out;
    out.manifold.name = "flat:d=" + std::to_string(d);
    out.manifold.dim = d;
    Chart c;
    c.id = 0;
    c.dim = d;
    c.center = Vec::Zero(d);
    c.radius = 1e7;
    out.manifold.atlas.push_back(std::move(c));
    out.manifold.christoffel.push_back(zero_christoffel(d));
    out.holonomy.kind = HolonomySpec::Kind::trivial;
    out.section = identity_section(out.manifold);
    out.default_start = FramePoint{0, Vec::Zero(d), Mat::Identity(d, d)};
    return out;
}

// ---- torus and Klein bottle: unit-cell atlases over the covering space ----

// Chart centers on the half-integer grid {0.25, 0.75}^d, radius 1/2;
// coordinates are covering-space coordinates, transitions are deck maps.
std::vector<Chart> unit_cell_atlas(int d) {
    if (d > 3) throw UnknownManifoldError("unit-cell atlas covers dim <= 3");
    const int n_charts = 1 << d;
    std::vector<Chart> atlas(static_cast<std::size_t>(n_charts));
    for (int id = 0; id < n_charts; ++id) {
        Chart& c = atlas[static_cast<std::size_t>(id)];
        c.id = id;
        c.dim = d;
        c.center = Vec::Zero(d);
        for (int i = 0; i < d; ++i) c.center[i] = (id >> i) & 1 ? 0.75 : 0.25;
        c.radius = 0.5;
    }
    return atlas;
}

void enumerate_offsets(int d, std::vector<Vec>& out) {
    const int total = 1;
    (void)total;
    std::vector<int> digit(static_cast<std::size_t>(d), 0);
    const int count = static_cast<int>(std::pow(3, d));
    for (int idx = 0; idx < count; ++idx) {
        int rem = idx;
        Vec z(d);
        for (int i = 0; i < d; ++i) {
            z[i] = static_cast<double>(rem % 3 - 1);
            rem /= 3;
        }
        out.push_back(std::move(z));
    }
}

BuiltManifold build_torus(int n) {
    BuiltManifold out;
    out.manifold.name = "torus:n=" + std::to_string(n);
    out.manifold.dim = n;
    out.manifold.atlas = unit_cell_atlas(n);
    std::vector<Vec> offsets;
    enumerate_offsets(n, offsets);
    const Mat eye = Mat::Identity(n, n);
    for (Chart& ci : out.manifold.atlas) {
        for (const Chart& cj : out.manifold.atlas) {
            for (const Vec& z : offsets) {
                if (ci.id == cj.id && z.cwiseAbs().maxCoeff() == 0.0) continue;
                if ((ci.center + z - cj.center).norm() >= ci.radius + cj.radius) continue;
                ci.neighbors.push_back(affine_transition(cj.id, eye, z));
            }
        }
        out.manifold.christoffel.push_back(zero_christoffel(n));
    }
    out.holonomy.kind = HolonomySpec::Kind::trivial;
    out.section = identity_section(out.manifold);
    out.default_start = FramePoint{0, Vec::Constant(n, 0.25), Mat::Identity(n, n)};
    return out;
}

BuiltManifold build_klein(int dim) {
    if (dim < 2) throw UnknownManifoldError("klein_bottle needs dim >= 2");
    const int n = dim - 1;
    BuiltManifold out;
    out.manifold.name = "klein_bottle:dim=" + std::to_string(dim);
    out.manifold.dim = dim;
    out.manifold.atlas = unit_cell_atlas(dim);
    std::vector<Vec> z_offsets;
    enumerate_offsets(n, z_offsets);

    for (Chart& ci : out.manifold.atlas) {
        for (const Chart& cj : out.manifold.atlas) {
            for (int w = -1; w <= 1; ++w) {
                const double flip = w == 0 ? 1.0 : -1.0;
                Mat linear = Mat::Identity(dim, dim);
                for (int i = 0; i < n; ++i) linear(i, i) = flip;
                for (const Vec& z : z_offsets) {
                    Vec offset = Vec::Zero(dim);
                    offset.head(n) = z;
                    offset[n] = w;
                    if (ci.id == cj.id && w == 0 && z.cwiseAbs().maxCoeff() == 0.0) continue;
                    if ((linear * ci.center + offset - cj.center).norm() >=
                        ci.radius + cj.radius)
                        continue;
                    ci.neighbors.push_back(affine_transition(cj.id, linear, offset));
                }
            }
        }
        out.manifold.christoffel.push_back(zero_christoffel(dim));
    }

    Mat gen = Mat::Identity(dim, dim);
    for (int i = 0; i < n; ++i) gen(i, i) = -1.0;
    out.holonomy.kind = HolonomySpec::Kind::z2_reflection;
    out.holonomy.generators.push_back(gen);
    out.manifold.holonomy_generators.push_back(gen);
    out.section = identity_section(out.manifold);
    out.default_start = FramePoint{0, Vec::Constant(dim, 0.25), Mat::Identity(dim, dim)};
    return out;
}

// ---- cylinder with the one-parameter family of connections ----

BuiltManifold build_cylinder(double alpha) {
    BuiltManifold out;
    out.manifold.name = "cylinder:alpha=" + std::to_string(alpha);
    out.manifold.dim = 2;

    // columns of charts around the circle, rows along the axis
    constexpr int kColumns = 4;
    constexpr int kRows = 81; // z centers -80..80 step 2
    constexpr double kRadius = 1.8;
    const double dtheta = M_PI / 2.0;
    auto chart_id = [&](int k, int row) { return k + kColumns * row; };
    for (int row = 0; row < kRows; ++row) {
        for (int k = 0; k < kColumns; ++k) {
            Chart c;
            c.id = chart_id(k, row);
            c.dim = 2;
            c.center = Vec(2);
            c.center << k * dtheta, 2.0 * (row - (kRows - 1) / 2);
            c.radius = kRadius;
            out.manifold.atlas.push_back(std::move(c));
        }
    }
    const Mat eye = Mat::Identity(2, 2);
    const double period = 2.0 * M_PI;
    for (Chart& ci : out.manifold.atlas) {
        for (const Chart& cj : out.manifold.atlas) {
            for (int wrap = -1; wrap <= 1; ++wrap) {
                if (ci.id == cj.id && wrap == 0) continue;
                Vec offset(2);
                offset << wrap * period, 0.0;
                if ((ci.center + offset - cj.center).norm() >= ci.radius + cj.radius) continue;
                ci.neighbors.push_back(affine_transition(cj.id, eye, offset));
            }
        }
    }

    // coordinates (theta, z); the only symbols are G^z_tt = -alpha and
    // G^t_tz = alpha (a connection with torsion).
    ChristoffelFn gamma = [alpha](const Vec&, Christoffel& g) {
        g[0].setZero();
        g[1].setZero();
        g[0](0, 1) = alpha;
        g[1](0, 0) = -alpha;
    };
    out.manifold.christoffel.assign(out.manifold.atlas.size(), gamma);

    const Mat rot = rotation2(2.0 * M_PI * alpha);
    out.holonomy.alpha = alpha;
    out.holonomy.generators.push_back(rot);
    out.manifold.holonomy_generators.push_back(rot);
    // classify: cyclic of order q when alpha = p/q with small q
    out.holonomy.kind = HolonomySpec::Kind::dense_cyclic;
    for (int q = 1; q <= 64; ++q) {
        const double scaled = alpha * q;
        if (std::abs(scaled - std::round(scaled)) < 1e-12) {
            out.holonomy.kind = alpha == std::round(alpha) ? HolonomySpec::Kind::trivial
                                                           : HolonomySpec::Kind::finite_cyclic;
            out.holonomy.cyclic_order = q;
            break;
        }
    }

    out.section = identity_section(out.manifold);
    const int start_chart = chart_id(0, (kRows - 1) / 2);
    out.default_start = FramePoint{start_chart, Vec::Zero(2), Mat::Identity(2, 2)};
    return out;
}

// ---- round sphere in stereographic charts ----

// Tangent-plane stereographic charts: chart 0 projects from the north pole
// onto the plane at the south pole and vice versa, so coordinates are
// isometric at each chart center and the equator sits at |x| = 2.
BuiltManifold build_sphere(int d) {
    if (d < 2) throw UnknownManifoldError("sphere needs d >= 2");
    BuiltManifold out;
    out.manifold.name = "sphere:d=" + std::to_string(d);
    out.manifold.dim = d;

    auto inversion = [](const Vec& x) {
        const double n2 = x.squaredNorm();
        if (n2 < 1e-30) return Vec(Vec::Constant(x.size(), std::nan("")));
        return Vec(4.0 * x / n2);
    };
    auto inversion_jac = [d](const Vec& x) {
        const double n2 = x.squaredNorm();
        Mat j = 4.0 * (Mat::Identity(d, d) - 2.0 * x * x.transpose() / n2) / n2;
        return j;
    };

    for (int id = 0; id < 2; ++id) {
        Chart c;
        c.id = id;
        c.dim = d;
        c.center = Vec::Zero(d);
        c.radius = 4.0;
        Transition tr;
        tr.to = 1 - id;
        tr.map = inversion;
        tr.jacobian = inversion_jac;
        c.neighbors.push_back(std::move(tr));
        out.manifold.atlas.push_back(std::move(c));
    }

    // Levi-Civita symbols of the round metric delta / (1 + |x|^2/4)^2.
    ChristoffelFn gamma = [d](const Vec& x, Christoffel& g) {
        const double f = -2.0 / (4.0 + x.squaredNorm());
        for (int k = 0; k < d; ++k) {
            Mat& gk = g[static_cast<std::size_t>(k)];
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) {
                    double v = 0.0;
                    if (i == k) v += x[j];
                    if (j == k) v += x[i];
                    if (i == j) v -= x[k];
                    gk(i, j) = f * v;
                }
        }
    };
    out.manifold.christoffel.assign(2, gamma);

    out.holonomy.kind = HolonomySpec::Kind::special_orthogonal;
    if (d == 2) {
        out.holonomy.generators.push_back(rotation2(1.0));
        out.holonomy.generators.push_back(rotation2(M_PI / 2.0));
    } else if (d == 3) {
        for (int i = 0; i < 3; ++i)
            out.holonomy.generators.push_back(so3_exp(Vec::Unit(3, i)));
    } else {
        throw UnknownManifoldError("sphere catalog covers d = 2 and 3");
    }
    out.manifold.holonomy_generators = out.holonomy.generators;

    // chart-coordinate frame, orthonormal at the chart centers; north wins
    out.section.id = "sphere_chart_frame";
    out.section.priority = {0, 1};
    out.section.frame = [d](int, const Vec&) { return Mat(Mat::Identity(d, d)); };

    out.default_start = FramePoint{0, Vec::Zero(d), Mat::Identity(d, d)};
    return out;
}

// ---- matrix groups with the left-invariant connection ----

Vec nan_vec(int d) { return Vec::Constant(d, std::nan("")); }

// central difference Jacobian of a chart transition
Mat fd_jacobian(const std::function<Vec(const Vec&)>& f, const Vec& x, double h) {
    const int d = static_cast<int>(x.size());
    Mat j(d, d);
    for (int i = 0; i < d; ++i) {
        Vec xp = x;
        Vec xm = x;
        xp[i] += h;
        xm[i] -= h;
        const Vec fp = f(xp);
        const Vec fm = f(xm);
        j.col(i) = (fp - fm) / (2.0 * h);
    }
    return j;
}

std::vector<Mat> octahedral_rotations() {
    std::vector<Mat> cs;
    cs.push_back(Mat::Identity(3, 3));
    for (int axis = 0; axis < 3; ++axis)
        for (double angle : {M_PI / 2.0, -M_PI / 2.0, M_PI})
            cs.push_back(so3_exp(angle * Vec::Unit(3, axis)));
    for (double sx : {1.0, -1.0})
        for (double sy : {1.0, -1.0})
            for (double sign : {1.0, -1.0}) {
                Vec axis(3);
                axis << sx, sy, 1.0;
                axis.normalize();
                cs.push_back(so3_exp(sign * (2.0 * M_PI / 3.0) * axis));
            }
    const double s = 1.0 / std::sqrt(2.0);
    const std::vector<Vec> edge_axes = [] {
        std::vector<Vec> v;
        for (auto [a, b] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
            for (double sgn : {1.0, -1.0}) {
                Vec axis = Vec::Zero(3);
                axis[a] = 1.0;
                axis[b] = sgn;
                v.push_back(axis / std::sqrt(2.0));
            }
        }
        return v;
    }();
    (void)s;
    for (const Vec& axis : edge_axes) cs.push_back(so3_exp(M_PI * axis));
    return cs;
}

BuiltManifold build_lie(const std::string& which) {
    BuiltManifold out;
    LieGroupSpec group = which == "so3" ? lie_so3() : lie_heisenberg();
    const int d = group.dim;

    std::vector<Mat> centers;
    double radius;
    std::function<Vec(const Mat&)> glog = group.log_fn;
    if (which == "so3") {
        centers = octahedral_rotations();
        radius = 1.9;
    } else {
        centers.push_back(group.identity());
        radius = 1e6;
    }

    out.manifold.name = "lie:" + which;
    out.manifold.dim = d;
    for (std::size_t k = 0; k < centers.size(); ++k) {
        Chart c;
        c.id = static_cast<int>(k);
        c.dim = d;
        c.center = Vec::Zero(d);
        c.radius = radius;
        out.manifold.atlas.push_back(std::move(c));
    }
    auto gexp = group.exp_fn;
    auto hat = [group](const Vec& w) { return group.hat(w); };
    for (std::size_t k = 0; k < centers.size(); ++k) {
        Chart& ck = out.manifold.atlas[k];
        for (std::size_t l = 0; l < centers.size(); ++l) {
            if (k == l) continue;
            const Mat rel = centers[l].inverse() * centers[k];
            Transition tr;
            tr.to = static_cast<int>(l);
            auto map = [rel, gexp, glog, hat, d](const Vec& x) -> Vec {
                try {
                    return glog(rel * gexp(hat(x)));
                } catch (const Error&) {
                    return nan_vec(d);
                }
            };
            tr.map = map;
            tr.jacobian = [map](const Vec& x) { return fd_jacobian(map, x, 1e-6); };
            ck.neighbors.push_back(std::move(tr));
        }
    }

    // left-invariant connection: Gamma^m_kl = -d_k(A)^m_j (A^{-1})^j_l with
    // A(x) the left-invariant frame in canonical coordinates.
    if (which == "so3") {
        ChristoffelFn gamma = [](const Vec& x, Christoffel& g) {
            const double h = 1e-5;
            const Mat a_inv = so3_left_frame_inv(x);
            for (int k = 0; k < 3; ++k) {
                Vec xp = x;
                Vec xm = x;
                xp[k] += h;
                xm[k] -= h;
                const Mat da = (so3_left_frame(xp) - so3_left_frame(xm)) / (2.0 * h);
                // Gamma^m_{k l}: row of g[m] at (k, l)
                const Mat prod = -da * a_inv;
                for (int m = 0; m < 3; ++m)
                    for (int l = 0; l < 3; ++l) g[static_cast<std::size_t>(m)](k, l) = prod(m, l);
            }
        };
        out.manifold.christoffel.assign(out.manifold.atlas.size(), gamma);
    } else {
        ChristoffelFn gamma = [](const Vec&, Christoffel& g) {
            g[0].setZero();
            g[1].setZero();
            g[2].setZero();
            g[2](0, 1) = -0.5;
            g[2](1, 0) = 0.5;
        };
        out.manifold.christoffel.assign(out.manifold.atlas.size(), gamma);
    }

    out.holonomy.kind = HolonomySpec::Kind::trivial;
    out.section = identity_section(out.manifold);
    out.default_start = FramePoint{0, Vec::Zero(d), Mat::Identity(d, d)};
    out.group = std::move(group);
    out.chart_centers_group = std::move(centers);
    return out;
}

} // namespace

Mat BuiltManifold::point_to_group(const ChartPoint& p) const {
    if (!group) throw UnknownManifoldError(manifold.name + " is not a matrix group");
    return chart_centers_group[static_cast<std::size_t>(p.chart)] * group->exp_fn(group->hat(p.x));
}

ChartPoint BuiltManifold::group_to_point(const Mat& g) const {
    if (!group) throw UnknownManifoldError(manifold.name + " is not a matrix group");
    ChartPoint best;
    double best_margin = -1.0;
    for (std::size_t k = 0; k < chart_centers_group.size(); ++k) {
        Vec x;
        try {
            x = group->log_fn(chart_centers_group[k].inverse() * g);
        } catch (const Error&) {
            continue;
        }
        if (!x.allFinite()) continue;
        const double margin = manifold.atlas[k].margin(x);
        if (margin > best_margin) {
            best_margin = margin;
            best = ChartPoint{static_cast<int>(k), std::move(x)};
        }
    }
    if (best_margin <= 0.0) throw ChartCoverageError("group element not covered by any chart");
    return best;
}

BuiltManifold build_manifold(const std::string& name) {
    const NameParams np = parse_name(name);
    if (np.base == "flat") return build_flat(static_cast<int>(get_param(np, "d", 2)));
    if (np.base == "torus") return build_torus(static_cast<int>(get_param(np, "n", 2)));
    if (np.base == "klein_bottle")
        return build_klein(static_cast<int>(get_param(np, "dim", 2)));
    if (np.base == "sphere") return build_sphere(static_cast<int>(get_param(np, "d", 2)));
    if (np.base == "cylinder") return build_cylinder(get_param(np, "alpha", 0.5));
    if (np.base == "lie:so3") return build_lie("so3");
    if (np.base == "lie:heisenberg") return build_lie("heisenberg");
    throw UnknownManifoldError("unknown manifold: " + name);
}

} // namespace mlevy
