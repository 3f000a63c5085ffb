#include "mlevy/euclid/invariance.hpp"

#include <cmath>

#include "mlevy/errors.hpp"

namespace mlevy {

namespace {

// Exact pushforward check for an atom list: every atom g x must be matched
// by an atom of equal weight (weights of coincident atoms are merged).
ConditionResult atoms_pushforward_check(const JumpMeasureSpec& nu, const Mat& g, double tol) {
    ConditionResult out;
    out.exact = true;
    out.threshold = tol;
    double worst = 0.0;
    for (const PointMass& a : nu.atoms) {
        const Vec gx = g * a.x;
        double mass_near = 0.0;
        for (const PointMass& b : nu.atoms)
            if ((b.x - gx).norm() <= 1e-9 * (1.0 + gx.norm())) mass_near += b.weight;
        worst = std::max(worst, std::abs(mass_near - a.weight));
    }
    out.statistic = worst;
    out.pass = worst <= tol;
    out.detail = "atom matching";
    return out;
}

ConditionResult measure_statistical_check(const JumpMeasureSpec& nu, const Mat& g, int n_mc,
                                          RngStream& rng) {
    std::vector<Vec> xs(static_cast<std::size_t>(n_mc));
    std::vector<Vec> gys(static_cast<std::size_t>(n_mc));
    for (auto& x : xs) x = nu.sample(rng);
    for (auto& y : gys) y = g * nu.sample(rng);
    const TwoSampleResult res = energy_permutation_test(xs, gys, 200, 0.01, rng);
    ConditionResult out;
    out.exact = false;
    out.statistic = res.statistic;
    out.threshold = res.threshold;
    out.pass = res.pass;
    out.detail = "energy permutation test, p = " + std::to_string(res.p_value);
    return out;
}

// Correction integral int (1(|g^{-1}x|<1) - 1(|x|<1)) nu(dx). The integrand
// vanishes near the origin, so the eps-truncated sample of an infinite
// activity measure already carries the full integral.
ConditionResult drift_check(const LevyTriplet& t, const Mat& g, const Mat& g_inv, int n_mc,
                            double tol, RngStream& rng) {
    ConditionResult out;
    const Vec lhs = g * t.b - t.b;
    const int d = t.dim();
    Vec integral = Vec::Zero(d);
    double se = 0.0;
    if (t.nu.kind == MeasureKind::point_masses) {
        out.exact = true;
        for (const PointMass& a : t.nu.atoms) {
            const double h = (((g_inv * a.x).norm() < 1.0) ? 1.0 : 0.0) -
                             ((a.x.norm() < 1.0) ? 1.0 : 0.0);
            integral += a.weight * h * a.x;
        }
    } else if (t.nu.total_intensity() > 0.0) {
        const double lambda = t.nu.total_intensity();
        Vec acc = Vec::Zero(d);
        double acc_sq = 0.0;
        for (int i = 0; i < n_mc; ++i) {
            const Vec x = t.nu.sample(rng);
            const double h = (((g_inv * x).norm() < 1.0) ? 1.0 : 0.0) -
                             ((x.norm() < 1.0) ? 1.0 : 0.0);
            const Vec term = h * x;
            acc += term;
            acc_sq += term.squaredNorm();
        }
        integral = lambda * acc / n_mc;
        const double mean_sq = acc_sq / n_mc;
        const double var = std::max(0.0, mean_sq - (acc / n_mc).squaredNorm());
        se = lambda * std::sqrt(var / n_mc);
    } else {
        out.exact = true;
    }
    out.statistic = (lhs - integral).norm();
    out.threshold = tol + 3.0 * se;
    out.pass = out.statistic <= out.threshold;
    out.detail = out.exact ? "closed form" : "monte carlo, se = " + std::to_string(se);
    return out;
}

} // namespace

InvarianceReport check_invariance(const LevyTriplet& triplet, const std::vector<Mat>& group,
                                  int n_mc, double tol, std::uint64_t seed) {
    triplet.validate();
    InvarianceReport report;
    report.pass = true;
    std::uint64_t stream = 0;
    for (const Mat& g : group) {
        if (g.rows() != triplet.dim() || g.cols() != triplet.dim())
            throw SingularGroupElementError("group element has wrong dimension");
        if (std::abs(g.determinant()) < 1e-12)
            throw SingularGroupElementError("group element is numerically singular");
        const Mat g_inv = g.inverse();

        ElementInvariance el;
        el.g = g;

        el.diffusion.exact = true;
        el.diffusion.statistic = (g * triplet.a * g.transpose() - triplet.a).norm();
        el.diffusion.threshold = tol;
        el.diffusion.pass = el.diffusion.statistic <= tol;
        el.diffusion.detail = "Frobenius norm of g a g^T - a";

        RngStream rng(seed ^ 0x1f3d5b79a1c2e4f6ULL, stream++);
        if (triplet.nu.total_intensity() <= 0.0) {
            el.measure.pass = true;
            el.measure.exact = true;
            el.measure.detail = "no jump part";
        } else if (triplet.nu.kind == MeasureKind::point_masses) {
            el.measure = atoms_pushforward_check(triplet.nu, g, tol);
        } else {
            el.measure = measure_statistical_check(triplet.nu, g, n_mc, rng);
        }

        el.drift = drift_check(triplet, g, g_inv, n_mc, tol, rng);
        el.pass = el.diffusion.pass && el.measure.pass && el.drift.pass;
        report.pass = report.pass && el.pass;
        report.elements.push_back(std::move(el));
    }
    return report;
}

std::vector<std::pair<double, Vec>> pushforward_atoms(
    const std::vector<std::pair<double, Vec>>& atoms,
    const std::function<Mat(double)>& g_process) {
    std::vector<std::pair<double, Vec>> out;
    out.reserve(atoms.size());
    for (const auto& [t, x] : atoms) {
        Mat g = g_process(t);
        if (std::abs(g.determinant()) < 1e-12)
            throw SingularGroupElementError("pushforward process is singular at t = " +
                                            std::to_string(t));
        out.emplace_back(t, g * x);
    }
    return out;
}

} // namespace mlevy
