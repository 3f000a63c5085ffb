#include "mlevy/manifolds/lie_compare.hpp"

#include <cmath>

namespace mlevy {

Mat LieGroupSpec::hat(const Vec& w) const {
    Mat a = Mat::Zero(mat_dim, mat_dim);
    for (int i = 0; i < dim; ++i) a += w[i] * basis[static_cast<std::size_t>(i)];
    return a;
}

void LieGroupSpec::validate(RngStream& rng, int n_samples) const {
    if (static_cast<int>(basis.size()) != dim) throw Error("lie basis size mismatch");
    if ((exp_fn(hat(Vec::Zero(dim))) - identity()).cwiseAbs().maxCoeff() > 1e-12)
        throw Error("lie exp(0) is not the identity");
    for (int s = 0; s < n_samples; ++s) {
        const Mat g = exp_fn(hat(rng.gaussian_vec(dim)));
        const Mat h = exp_fn(hat(rng.gaussian_vec(dim)));
        if (membership_residual(product(g, h)) > 1e-10)
            throw Error("lie group not closed under product");
    }
}

LieGroupSpec lie_so3() {
    LieGroupSpec g;
    g.name = "so3";
    g.mat_dim = 3;
    g.dim = 3;
    for (int i = 0; i < 3; ++i) g.basis.push_back(so3_hat(Vec::Unit(3, i)));
    g.exp_fn = [](const Mat& a) { return expm_series(a); };
    g.log_fn = [](const Mat& r) { return so3_log(r); };
    g.membership_residual = [](const Mat& r) {
        return std::max((r * r.transpose() - Mat::Identity(3, 3)).cwiseAbs().maxCoeff(),
                        std::abs(r.determinant() - 1.0));
    };
    return g;
}

LieGroupSpec lie_heisenberg() {
    LieGroupSpec g;
    g.name = "heisenberg";
    g.mat_dim = 3;
    g.dim = 3;
    for (int i = 0; i < 3; ++i) g.basis.push_back(heis_hat(Vec::Unit(3, i)));
    g.exp_fn = [](const Mat& a) { return expm_series(a); };
    g.log_fn = [](const Mat& m) { return heis_log(m); };
    g.membership_residual = [](const Mat& m) {
        double r = 0.0;
        for (int i = 0; i < 3; ++i) r = std::max(r, std::abs(m(i, i) - 1.0));
        r = std::max({r, std::abs(m(1, 0)), std::abs(m(2, 0)), std::abs(m(2, 1))});
        return r;
    };
    return g;
}

namespace {

Vec flatten(const Mat& m) {
    Vec v(m.size());
    for (Eigen::Index j = 0, k = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i, ++k) v[k] = m(i, j);
    return v;
}

// angle of a rotation / norm of a group increment, used to bin jumps
double increment_size(const LieGroupSpec& g, const Mat& inc) {
    if (g.name == "so3") {
        const double arg = 0.5 * (inc.trace() - 1.0);
        return std::acos(std::min(1.0, std::max(-1.0, arg)));
    }
    return heis_log(inc).norm();
}

} // namespace

LieCompareReport lie_marcus_vs_increment(const BuiltManifold& lie, const LevyTriplet& triplet,
                                         double horizon, std::size_t n_paths,
                                         const LieCompareConfig& config, std::uint64_t seed) {
    if (!lie.group) throw UnknownManifoldError("lie_marcus_vs_increment needs a lie manifold");
    const LieGroupSpec& group = *lie.group;

    std::vector<Mat> marcus_terminals;
    std::vector<Mat> product_terminals;
    marcus_terminals.reserve(n_paths);
    product_terminals.reserve(n_paths);
    double max_defect = 0.0;
    std::vector<double> jump_sizes_marcus;
    std::vector<double> jump_sizes_direct;

    for (std::size_t i = 0; i < n_paths; ++i) {
        RngStream rng(seed, i);
        const EuclidPath driver = sample_levy_path(triplet, horizon, config.grid_step, rng);

        // route (i): Marcus solve on the frame bundle of the group manifold
        BundlePath bundle = marcus_solve(lie.manifold, driver, lie.default_start, config.marcus);
        if (bundle.stopped_at) continue;
        const ManifoldPath x = project(bundle);
        marcus_terminals.push_back(lie.point_to_group(x.p.back()));
        for (const ManifoldJump& jump : x.jumps) {
            const Mat pre = lie.point_to_group(jump.pre);
            const Mat post = lie.point_to_group(jump.post);
            const PathJump* dy = driver.jump_at(jump.index);
            const Mat expected = pre * group.exp_fn(group.hat(dy->delta));
            max_defect = std::max(max_defect, (post - expected).cwiseAbs().maxCoeff());
            jump_sizes_marcus.push_back(increment_size(group, Mat(pre.inverse() * post)));
        }

        // route (ii): left increments, Strang split around the Gaussian part
        Mat g = lie.chart_centers_group[static_cast<std::size_t>(lie.default_start.chart)] *
                group.exp_fn(group.hat(lie.default_start.x));
        const Vec drift = triplet.b - triplet.nu.mean_small_jump();
        for (std::size_t c = 0; c + 1 < driver.size(); ++c) {
            const double dt = driver.t[c + 1] - driver.t[c];
            const Vec gauss = driver.continuous_increment(c) - drift * dt;
            g = g * group.exp_fn(group.hat(0.5 * dt * drift));
            g = g * group.exp_fn(group.hat(gauss));
            g = g * group.exp_fn(group.hat(0.5 * dt * drift));
            if (const PathJump* jump = driver.jump_at(c + 1)) {
                const Mat inc = group.exp_fn(group.hat(jump->delta));
                jump_sizes_direct.push_back(increment_size(group, inc));
                g = g * inc;
            }
        }
        product_terminals.push_back(std::move(g));
    }

    LieCompareReport report;
    report.n_paths = n_paths;
    report.max_jump_defect = max_defect;

    // terminal distributions via the energy permutation test on a subsample
    RngStream test_rng(seed ^ 0xace1246801357bdfULL, 1);
    const std::size_t m = std::min<std::size_t>(
        {static_cast<std::size_t>(config.energy_subsample), marcus_terminals.size(),
         product_terminals.size()});
    std::vector<Vec> a;
    std::vector<Vec> b;
    a.reserve(m);
    b.reserve(m);
    const std::size_t stride_a = std::max<std::size_t>(1, marcus_terminals.size() / m);
    const std::size_t stride_b = std::max<std::size_t>(1, product_terminals.size() / m);
    for (std::size_t i = 0; i < m; ++i) {
        a.push_back(flatten(marcus_terminals[i * stride_a]));
        b.push_back(flatten(product_terminals[i * stride_b]));
    }
    report.terminal_test =
        energy_permutation_test(a, b, config.energy_permutations, 0.01, test_rng);

    // jump-size pushforward: binned two-sample chi-square
    if (!jump_sizes_marcus.empty() && !jump_sizes_direct.empty()) {
        double hi = 0.0;
        for (double s : jump_sizes_marcus) hi = std::max(hi, s);
        for (double s : jump_sizes_direct) hi = std::max(hi, s);
        hi = std::max(hi, 1e-9) * 1.0000001;
        std::vector<double> ca(static_cast<std::size_t>(config.histogram_bins), 0.0);
        std::vector<double> cb = ca;
        for (double s : jump_sizes_marcus)
            ++ca[static_cast<std::size_t>(s / hi * config.histogram_bins)];
        for (double s : jump_sizes_direct)
            ++cb[static_cast<std::size_t>(s / hi * config.histogram_bins)];
        report.jump_pushforward = chi_square_two_sample(ca, cb);
    } else {
        report.jump_pushforward.p_value = 1.0;
        report.jump_pushforward.dof = 0;
    }

    report.pass = report.terminal_test.pass && report.jump_pushforward.p_value > 0.01;
    return report;
}

} // namespace mlevy
