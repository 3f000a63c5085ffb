#include "mlevy/gen/generator.hpp"

#include <cmath>

namespace mlevy {

namespace {

using FrameFn = std::function<double(const FramePoint&)>;
using JumpEndpointFn = std::function<double(const Vec& x)>;

// d/dt f(flow_exp(v, t e)) at t = 0, central difference.
double flow_derivative(const ManifoldSpec& m, const FrameFn& f, const FramePoint& v,
                       const Vec& e, const QuadratureConfig& quad) {
    const double h = quad.derivative_step;
    const FramePoint fwd = flow_exp(m, v, h * e, quad.derivative_flow_steps, quad.explosion_bound);
    const FramePoint bwd = flow_exp(m, v, -h * e, quad.derivative_flow_steps, quad.explosion_bound);
    return (f(fwd) - f(bwd)) / (2.0 * h);
}

// H_i H_j f(v) by nested central differences.
double flow_second_derivative(const ManifoldSpec& m, const FrameFn& f, const FramePoint& v,
                              const Vec& ei, const Vec& ej, const QuadratureConfig& quad) {
    const double h = quad.derivative_step;
    const FramePoint fwd = flow_exp(m, v, h * ei, quad.derivative_flow_steps, quad.explosion_bound);
    const FramePoint bwd = flow_exp(m, v, -h * ei, quad.derivative_flow_steps, quad.explosion_bound);
    return (flow_derivative(m, f, fwd, ej, quad) - flow_derivative(m, f, bwd, ej, quad)) /
           (2.0 * h);
}

double generator_core(const ManifoldSpec& m, const LevyTriplet& triplet, const FrameFn& f,
                      const FramePoint& v, const QuadratureConfig& quad,
                      const JumpEndpointFn& f_at_jump) {
    check_frame_point(m, v);
    const int d = m.dim;
    double total = 0.0;

    if (triplet.b.cwiseAbs().maxCoeff() > 0.0)
        total += flow_derivative(m, f, v, triplet.b, quad);

    // gradient along the frame directions, shared by the jump compensator
    std::vector<double> grad(static_cast<std::size_t>(d), 0.0);
    const bool need_grad = triplet.has_jumps();
    if (need_grad) {
        for (int i = 0; i < d; ++i)
            grad[static_cast<std::size_t>(i)] =
                flow_derivative(m, f, v, Vec::Unit(d, i), quad);
    }

    if (triplet.has_gaussian()) {
        for (int i = 0; i < d; ++i) {
            for (int j = 0; j < d; ++j) {
                const double aij = triplet.a(i, j);
                if (aij == 0.0) continue;
                total += 0.5 * aij *
                         flow_second_derivative(m, f, v, Vec::Unit(d, i), Vec::Unit(d, j), quad);
            }
        }
    }

    if (triplet.has_jumps()) {
        const double fv = f(v);
        auto integrand = [&](const Vec& x) {
            double val = f_at_jump(x) - fv;
            if (x.norm() < 1.0) {
                for (int i = 0; i < d; ++i) val -= x[i] * grad[static_cast<std::size_t>(i)];
            }
            return val;
        };
        if (quad.mode == QuadratureConfig::JumpMode::atoms) {
            if (triplet.nu.kind != MeasureKind::point_masses)
                throw UnsupportedMeasureError(
                    "atoms quadrature needs a point-mass jump measure");
            for (const PointMass& a : triplet.nu.atoms) total += a.weight * integrand(a.x);
        } else {
            RngStream rng(quad.seed, 0x6a09e667f3bcc908ULL);
            const double lambda = triplet.nu.total_intensity();
            double acc = 0.0;
            for (int s = 0; s < quad.n_samples; ++s) acc += integrand(triplet.nu.sample(rng));
            total += lambda * acc / quad.n_samples;
        }
    }
    return total;
}

} // namespace

double horizontal_generator_apply(const ManifoldSpec& m, const LevyTriplet& triplet,
                                  const FrameFn& f_bundle, const FramePoint& v,
                                  const QuadratureConfig& quad) {
    return generator_core(m, triplet, f_bundle, v, quad, [&](const Vec& x) {
        return f_bundle(flow_exp(m, v, x, quad.flow_steps, quad.explosion_bound));
    });
}

double generator_apply(const ManifoldSpec& m, const LevyTriplet& triplet, const TestFunction& f,
                       const ChartPoint& p, const FramePoint& v, const QuadratureConfig& quad) {
    if (!same_point(m, p, ChartPoint{v.chart, v.x}, 1e-9))
        throw Error("generator_apply: frame does not sit over the requested point");
    FrameFn through_projection = [&](const FramePoint& u) {
        return f.on_manifold(ChartPoint{u.chart, u.x});
    };
    return generator_core(m, triplet, through_projection, v, quad, [&](const Vec& x) {
        return f.on_manifold(geodesic_exp(m, ChartPoint{v.chart, v.x}, v.r * x, quad.flow_steps,
                                          quad.explosion_bound));
    });
}

double symmetric_jump_generator(const ManifoldSpec& m, const JumpMeasureSpec& nu,
                                const TestFunction& f, const ChartPoint& p, const FramePoint& v,
                                const QuadratureConfig& quad) {
    bool has_minus_identity = false;
    for (const Mat& g : m.holonomy_generators)
        has_minus_identity =
            has_minus_identity || (g + Mat::Identity(m.dim, m.dim)).cwiseAbs().maxCoeff() <= 1e-12;
    if (!has_minus_identity)
        throw SymmetryPreconditionError(
            "-I is not among the declared holonomy generators of " + m.name);
    if (!same_point(m, p, ChartPoint{v.chart, v.x}, 1e-9))
        throw Error("symmetric_jump_generator: frame does not sit over the requested point");

    const double fp = f.on_manifold(p);
    auto contribution = [&](const Vec& x) {
        const ChartPoint fwd = geodesic_exp(m, ChartPoint{v.chart, v.x}, v.r * x, quad.flow_steps,
                                            quad.explosion_bound);
        const ChartPoint bwd = geodesic_exp(m, ChartPoint{v.chart, v.x}, -(v.r * x),
                                            quad.flow_steps, quad.explosion_bound);
        return f.on_manifold(fwd) - 2.0 * fp + f.on_manifold(bwd);
    };

    double total = 0.0;
    if (quad.mode == QuadratureConfig::JumpMode::atoms) {
        if (nu.kind != MeasureKind::point_masses)
            throw UnsupportedMeasureError("atoms quadrature needs a point-mass jump measure");
        for (const PointMass& a : nu.atoms) total += a.weight * contribution(a.x);
    } else {
        RngStream rng(quad.seed, 0x5be0cd19137e2179ULL);
        double acc = 0.0;
        for (int s = 0; s < quad.n_samples; ++s) acc += contribution(nu.sample(rng));
        total = nu.total_intensity() * acc / quad.n_samples;
    }
    return 0.5 * total;
}

} // namespace mlevy
