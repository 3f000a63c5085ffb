#include "mlevy/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mlevy/errors.hpp"

namespace mlevy {

namespace {

// Series expansion of P(a, x), valid for x < a + 1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::abs(del) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a, x), valid for x >= a + 1.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

} // namespace

double regularized_gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw Error("regularized_gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    return x < a + 1.0 ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double chi_square_sf(double x, int dof) {
    if (dof <= 0) throw Error("chi_square_sf: dof must be positive");
    return 1.0 - regularized_gamma_p(0.5 * dof, 0.5 * x);
}

namespace {

double mean_cross_distance(const std::vector<const Vec*>& pool, std::size_t na,
                           const std::vector<std::size_t>& order, const Mat& dist) {
    // dist is the pooled pairwise distance matrix; order assigns labels.
    const std::size_t n = order.size();
    double xy = 0.0, xx = 0.0, yy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dij = dist(static_cast<Eigen::Index>(order[i]),
                                    static_cast<Eigen::Index>(order[j]));
            const bool ia = i < na;
            const bool ja = j < na;
            if (ia && ja) xx += dij;
            else if (!ia && !ja) yy += dij;
            else xy += dij;
        }
    }
    const double nb = static_cast<double>(n - na);
    const double da = static_cast<double>(na);
    (void)pool;
    return 2.0 * xy / (da * nb) - 2.0 * xx / (da * da) - 2.0 * yy / (nb * nb);
}

} // namespace

double energy_distance(const std::vector<Vec>& a, const std::vector<Vec>& b) {
    if (a.empty() || b.empty()) throw Error("energy_distance: empty sample");
    double xy = 0.0, xx = 0.0, yy = 0.0;
    for (const Vec& x : a)
        for (const Vec& y : b) xy += (x - y).norm();
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) xx += (a[i] - a[j]).norm();
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j) yy += (b[i] - b[j]).norm();
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    return 2.0 * xy / (na * nb) - 2.0 * xx / (na * na) - 2.0 * yy / (nb * nb);
}

TwoSampleResult energy_permutation_test(const std::vector<Vec>& a, const std::vector<Vec>& b,
                                        int n_permutations, double level, RngStream& rng) {
    const std::size_t na = a.size();
    const std::size_t n = na + b.size();
    std::vector<const Vec*> pool;
    pool.reserve(n);
    for (const Vec& x : a) pool.push_back(&x);
    for (const Vec& y : b) pool.push_back(&y);

    Mat dist(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = (*pool[i] - *pool[j]).norm();
            dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d;
            dist(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = d;
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    TwoSampleResult out;
    out.statistic = mean_cross_distance(pool, na, order, dist);

    std::vector<double> null_stats(static_cast<std::size_t>(n_permutations));
    int at_least = 0;
    for (double& s : null_stats) {
        // Fisher-Yates shuffle of the pooled labels
        for (std::size_t i = n - 1; i > 0; --i) {
            const std::size_t j = static_cast<std::size_t>(rng.uniform() * (i + 1));
            std::swap(order[i], order[std::min(j, i)]);
        }
        s = mean_cross_distance(pool, na, order, dist);
        if (s >= out.statistic) ++at_least;
    }
    std::sort(null_stats.begin(), null_stats.end());
    const auto q = static_cast<std::size_t>(
        std::min<double>(static_cast<double>(null_stats.size() - 1),
                         std::ceil((1.0 - level) * n_permutations)));
    out.threshold = null_stats[q];
    out.p_value = (1.0 + at_least) / (1.0 + n_permutations);
    out.pass = out.p_value > level;
    return out;
}

ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& expected) {
    if (observed.size() != expected.size() || observed.empty())
        throw Error("chi_square_gof: size mismatch");
    ChiSquareResult out;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0.0) throw Error("chi_square_gof: non-positive expected count");
        const double diff = observed[i] - expected[i];
        out.statistic += diff * diff / expected[i];
    }
    out.dof = static_cast<int>(observed.size()) - 1;
    out.p_value = chi_square_sf(out.statistic, out.dof);
    return out;
}

ChiSquareResult chi_square_two_sample(const std::vector<double>& counts_a,
                                      const std::vector<double>& counts_b) {
    if (counts_a.size() != counts_b.size() || counts_a.empty())
        throw Error("chi_square_two_sample: size mismatch");
    const double na = std::accumulate(counts_a.begin(), counts_a.end(), 0.0);
    const double nb = std::accumulate(counts_b.begin(), counts_b.end(), 0.0);
    const double ka = std::sqrt(nb / na);
    const double kb = std::sqrt(na / nb);
    ChiSquareResult out;
    int used = 0;
    for (std::size_t i = 0; i < counts_a.size(); ++i) {
        const double tot = counts_a[i] + counts_b[i];
        if (tot <= 0.0) continue;
        const double diff = ka * counts_a[i] - kb * counts_b[i];
        out.statistic += diff * diff / tot;
        ++used;
    }
    out.dof = std::max(1, used - 1);
    out.p_value = chi_square_sf(out.statistic, out.dof);
    return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw Error("loglog_slope: need >= 2 points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

MeanStd mean_std_error(const std::vector<double>& xs) {
    MeanStd out;
    out.n = xs.size();
    if (xs.empty()) return out;
    out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double v : xs) ss += (v - out.mean) * (v - out.mean);
    if (xs.size() > 1)
        out.std_error = std::sqrt(ss / (static_cast<double>(xs.size() - 1) *
                                        static_cast<double>(xs.size())));
    return out;
}

} // namespace mlevy
