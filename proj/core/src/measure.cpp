#include "mlevy/euclid/measure.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace mlevy {

namespace {

// Simpson quadrature over [a, b].
template <typename F>
double simpson(F&& f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return acc * h / 3.0;
}

// Density of |X| for X ~ N(0, I_d), the chi distribution.
double chi_density(double r, int d) {
    const double log_norm = (1.0 - 0.5 * d) * std::log(2.0) - std::lgamma(0.5 * d);
    return std::exp(log_norm + (d - 1) * std::log(r) - 0.5 * r * r);
}

} // namespace

void JumpMeasureSpec::validate() const {
    if (dim < 1) throw UnsupportedMeasureError("jump measure dimension must be positive");
    switch (kind) {
        case MeasureKind::point_masses:
            for (const PointMass& a : atoms) {
                if (a.weight < 0.0) throw UnsupportedMeasureError("negative atom weight");
                if (a.x.size() != dim) throw UnsupportedMeasureError("atom dimension mismatch");
                if (a.x.norm() == 0.0)
                    throw UnsupportedMeasureError("jump measure must not charge the origin");
            }
            break;
        case MeasureKind::uniform_sphere_shell:
            if (radius <= 0.0 || intensity < 0.0)
                throw UnsupportedMeasureError("shell needs radius > 0 and intensity >= 0");
            break;
        case MeasureKind::gaussian_radial:
            if (sigma <= 0.0 || intensity < 0.0)
                throw UnsupportedMeasureError("gaussian_radial needs sigma > 0, intensity >= 0");
            break;
        case MeasureKind::truncated_stable:
            if (!(stable_index > 0.0 && stable_index < 2.0))
                throw UnsupportedMeasureError("stable index must lie in (0, 2)");
            if (eps <= 0.0 || support_radius <= eps)
                throw UnsupportedMeasureError("need 0 < eps < support_radius");
            if (one_sided && dim != 1)
                throw UnsupportedMeasureError("one_sided only makes sense for dim == 1");
            break;
    }
}

double JumpMeasureSpec::total_intensity() const {
    switch (kind) {
        case MeasureKind::point_masses: {
            double s = 0.0;
            for (const PointMass& a : atoms) s += a.weight;
            return s;
        }
        case MeasureKind::uniform_sphere_shell:
        case MeasureKind::gaussian_radial:
            return intensity;
        case MeasureKind::truncated_stable: {
            const double al = stable_index;
            const double mass =
                scale * (std::pow(eps, -al) - std::pow(support_radius, -al)) / al;
            return one_sided || dim > 1 ? mass : 2.0 * mass;
        }
    }
    return 0.0;
}

Vec JumpMeasureSpec::sample(RngStream& rng) const {
    switch (kind) {
        case MeasureKind::point_masses: {
            const double total = total_intensity();
            double u = rng.uniform() * total;
            for (const PointMass& a : atoms) {
                u -= a.weight;
                if (u <= 0.0) return a.x;
            }
            return atoms.back().x;
        }
        case MeasureKind::uniform_sphere_shell:
            return radius * rng.unit_direction(dim);
        case MeasureKind::gaussian_radial: {
            while (true) {
                Vec x = sigma * rng.gaussian_vec(dim);
                if (x.norm() > 0.0) return x;
            }
        }
        case MeasureKind::truncated_stable: {
            const double al = stable_index;
            const double lo = std::pow(support_radius, -al);
            const double hi = std::pow(eps, -al);
            const double r = std::pow(hi - rng.uniform() * (hi - lo), -1.0 / al);
            if (dim > 1) return r * rng.unit_direction(dim);
            Vec x(1);
            x[0] = one_sided ? r : (rng.uniform() < 0.5 ? r : -r);
            return x;
        }
    }
    throw UnsupportedMeasureError("unknown measure kind");
}

Vec JumpMeasureSpec::mean_small_jump() const {
    Vec out = Vec::Zero(dim);
    switch (kind) {
        case MeasureKind::point_masses:
            for (const PointMass& a : atoms)
                if (a.x.norm() < 1.0) out += a.weight * a.x;
            return out;
        case MeasureKind::uniform_sphere_shell:
        case MeasureKind::gaussian_radial:
            return out; // symmetric about the origin
        case MeasureKind::truncated_stable: {
            if (!one_sided) return out; // symmetric or isotropic
            const double top = std::min(1.0, support_radius);
            if (top <= eps) return out;
            const double al = stable_index;
            // int_eps^top r * scale r^(-1-al) dr
            const double m = al == 1.0
                                 ? scale * std::log(top / eps)
                                 : scale * (std::pow(top, 1.0 - al) - std::pow(eps, 1.0 - al)) /
                                       (1.0 - al);
            out[0] = m;
            return out;
        }
    }
    return out;
}

double JumpMeasureSpec::second_moment_below(double r) const {
    if (r <= 0.0) return 0.0;
    switch (kind) {
        case MeasureKind::point_masses: {
            double s = 0.0;
            for (const PointMass& a : atoms)
                if (a.x.norm() < r) s += a.weight * a.x.squaredNorm();
            return s;
        }
        case MeasureKind::uniform_sphere_shell:
            return radius < r ? intensity * radius * radius : 0.0;
        case MeasureKind::gaussian_radial: {
            const double top = std::min(r / sigma, 40.0);
            const double partial = simpson(
                [&](double s) { return s * s * chi_density(s, dim); }, 0.0, top, 4096);
            return intensity * sigma * sigma * partial;
        }
        case MeasureKind::truncated_stable: {
            const double top = std::min(r, support_radius);
            const double al = stable_index;
            // int_0^top r^2 * scale r^(-1-al) dr, both tails when two-sided
            const double m = scale * std::pow(top, 2.0 - al) / (2.0 - al);
            return one_sided || dim > 1 ? m : 2.0 * m;
        }
    }
    throw UnsupportedMeasureError("unknown measure kind");
}

double small_jump_truncation_bias(const JumpMeasureSpec& nu, double eps) {
    if (eps <= 0.0) throw UnsupportedMeasureError("truncation level must be positive");
    return nu.second_moment_below(eps);
}

namespace {

const char* kind_name(MeasureKind k) {
    switch (k) {
        case MeasureKind::point_masses: return "point_masses";
        case MeasureKind::uniform_sphere_shell: return "uniform_sphere_shell";
        case MeasureKind::gaussian_radial: return "gaussian_radial";
        case MeasureKind::truncated_stable: return "truncated_stable";
    }
    return "?";
}

} // namespace

void to_json(nlohmann::json& j, const JumpMeasureSpec& nu) {
    j = nlohmann::json{{"kind", kind_name(nu.kind)}, {"dim", nu.dim}};
    switch (nu.kind) {
        case MeasureKind::point_masses: {
            auto arr = nlohmann::json::array();
            for (const PointMass& a : nu.atoms) {
                std::vector<double> x(a.x.data(), a.x.data() + a.x.size());
                arr.push_back({{"x", x}, {"w", a.weight}});
            }
            j["atoms"] = std::move(arr);
            break;
        }
        case MeasureKind::uniform_sphere_shell:
            j["radius"] = nu.radius;
            j["intensity"] = nu.intensity;
            break;
        case MeasureKind::gaussian_radial:
            j["sigma"] = nu.sigma;
            j["intensity"] = nu.intensity;
            break;
        case MeasureKind::truncated_stable:
            j["alpha"] = nu.stable_index;
            j["eps"] = nu.eps;
            j["support_radius"] = nu.support_radius;
            j["scale"] = nu.scale;
            j["one_sided"] = nu.one_sided;
            break;
    }
}

void from_json(const nlohmann::json& j, JumpMeasureSpec& nu) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "point_masses") {
        nu.kind = MeasureKind::point_masses;
        nu.atoms.clear();
        for (const auto& a : j.at("atoms")) {
            auto xs = a.at("x").get<std::vector<double>>();
            PointMass pm;
            pm.x = Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
            pm.weight = a.at("w").get<double>();
            nu.atoms.push_back(std::move(pm));
        }
        nu.dim = j.contains("dim") ? j.at("dim").get<int>()
                                   : static_cast<int>(nu.atoms.at(0).x.size());
    } else if (kind == "uniform_sphere_shell") {
        nu.kind = MeasureKind::uniform_sphere_shell;
        nu.dim = j.at("dim").get<int>();
        nu.radius = j.at("radius").get<double>();
        nu.intensity = j.at("intensity").get<double>();
    } else if (kind == "gaussian_radial") {
        nu.kind = MeasureKind::gaussian_radial;
        nu.dim = j.at("dim").get<int>();
        nu.sigma = j.at("sigma").get<double>();
        nu.intensity = j.at("intensity").get<double>();
    } else if (kind == "truncated_stable") {
        nu.kind = MeasureKind::truncated_stable;
        nu.dim = j.at("dim").get<int>();
        nu.stable_index = j.at("alpha").get<double>();
        nu.eps = j.at("eps").get<double>();
        nu.support_radius = j.at("support_radius").get<double>();
        nu.scale = j.at("scale").get<double>();
        nu.one_sided = j.value("one_sided", false);
    } else {
        throw UnsupportedMeasureError("unknown jump measure kind: " + kind);
    }
    nu.validate();
}

JumpMeasureSpec make_point_masses(std::vector<PointMass> atoms) {
    JumpMeasureSpec nu;
    nu.kind = MeasureKind::point_masses;
    nu.atoms = std::move(atoms);
    nu.dim = static_cast<int>(nu.atoms.at(0).x.size());
    nu.validate();
    return nu;
}

JumpMeasureSpec make_two_atoms(const Vec& x, double weight_each) {
    return make_point_masses({PointMass{x, weight_each}, PointMass{-x, weight_each}});
}

JumpMeasureSpec make_sphere_shell(int dim, double radius, double intensity) {
    JumpMeasureSpec nu;
    nu.kind = MeasureKind::uniform_sphere_shell;
    nu.dim = dim;
    nu.radius = radius;
    nu.intensity = intensity;
    nu.validate();
    return nu;
}

JumpMeasureSpec make_gaussian_radial(int dim, double sigma, double intensity) {
    JumpMeasureSpec nu;
    nu.kind = MeasureKind::gaussian_radial;
    nu.dim = dim;
    nu.sigma = sigma;
    nu.intensity = intensity;
    nu.validate();
    return nu;
}

} // namespace mlevy
