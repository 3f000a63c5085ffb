#pragma once

#include <cmath>
#include <functional>

#include "mlevy/geometry/geometry.hpp"
#include "mlevy/rng.hpp"

namespace mlevy::testing {

// Random invertible matrix with entries in [-1, 1], conditioned away from
// singularity.
inline Mat random_gl(int d, RngStream& rng, double min_det = 0.05) {
    while (true) {
        Mat g(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) g(i, j) = rng.uniform(-1.0, 1.0);
        if (std::abs(g.determinant()) > min_det) return g;
    }
}

// Finite-difference Levi-Civita symbols of a diagonal conformal metric
// lambda(x)^2 I; the independent oracle for chart symbol tables.
inline Christoffel levi_civita_fd(const std::function<double(const Vec&)>& lambda, const Vec& x,
                                  double h = 1e-5) {
    const int d = static_cast<int>(x.size());
    auto metric = [&](const Vec& p, int i, int j) {
        const double l = lambda(p);
        return i == j ? l * l : 0.0;
    };
    auto dmetric = [&](int a, int i, int j) {
        Vec xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        return (metric(xp, i, j) - metric(xm, i, j)) / (2.0 * h);
    };
    const double l0 = lambda(x);
    const double ginv = 1.0 / (l0 * l0);
    Christoffel g = make_christoffel_storage(d);
    for (int k = 0; k < d; ++k)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                g[static_cast<std::size_t>(k)](i, j) =
                    0.5 * ginv * (dmetric(i, j, k) + dmetric(j, i, k) - dmetric(k, i, j));
    return g;
}

// Sphere chart <-> R^(d+1) embedding for the tangent-plane stereographic
// atlas (chart 0 projects from the north pole e_{d+1}).
inline Vec sphere_embed(const ChartPoint& p) {
    const int d = static_cast<int>(p.x.size());
    const double u = p.x.squaredNorm() / 4.0;
    Vec y(d + 1);
    y.head(d) = p.x / (1.0 + u);
    y[d] = (u - 1.0) / (u + 1.0);
    if (p.chart == 1) y[d] = -y[d];
    return y;
}

// Differential of the embedding, by central differences (oracle-side only).
inline Mat sphere_embed_diff(const ChartPoint& p, double h = 1e-6) {
    const int d = static_cast<int>(p.x.size());
    Mat out(d + 1, d);
    for (int i = 0; i < d; ++i) {
        ChartPoint pp = p, pm = p;
        pp.x[i] += h;
        pm.x[i] -= h;
        out.col(i) = (sphere_embed(pp) - sphere_embed(pm)) / (2.0 * h);
    }
    return out;
}

// Closed-form great circle: start embedding y0, initial embedded velocity
// w; position after unit time.
inline Vec great_circle(const Vec& y0, const Vec& w) {
    const double speed = w.norm();
    if (speed == 0.0) return y0;
    return std::cos(speed) * y0 + std::sin(speed) * (w / speed);
}

} // namespace mlevy::testing
