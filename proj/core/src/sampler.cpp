#include "mlevy/euclid/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "mlevy/errors.hpp"

namespace mlevy {

EuclidPath sample_levy_path(const LevyTriplet& triplet, double horizon, double grid_step,
                            RngStream& rng) {
    if (horizon <= 0.0 || grid_step <= 0.0)
        throw Error("sample_levy_path: horizon and grid_step must be positive");
    const int d = triplet.dim();
    const auto n_regular =
        std::max<std::int64_t>(1, std::llround(horizon / grid_step));

    // Jump times first, then marks, then the Gaussian field; the draw order
    // is part of the determinism contract.
    const double lambda = triplet.nu.total_intensity();
    std::vector<double> jump_times;
    if (lambda > 0.0) {
        const std::uint64_t count = rng.poisson(lambda * horizon);
        jump_times.resize(count);
        for (auto& s : jump_times) s = rng.uniform() * horizon;
        std::sort(jump_times.begin(), jump_times.end());
        jump_times.erase(std::unique(jump_times.begin(), jump_times.end()), jump_times.end());
        while (!jump_times.empty() && jump_times.front() <= 0.0)
            jump_times.erase(jump_times.begin());
    }
    std::vector<Vec> marks(jump_times.size());
    for (auto& m : marks) m = triplet.nu.sample(rng);

    EuclidPath path;
    path.t.reserve(static_cast<std::size_t>(n_regular) + jump_times.size() + 1);
    path.regular_index.reserve(path.t.capacity());
    std::size_t jt = 0;
    for (std::int64_t i = 0; i <= n_regular; ++i) {
        const double tr = i == n_regular ? horizon : (horizon * static_cast<double>(i)) /
                                                         static_cast<double>(n_regular);
        while (jt < jump_times.size() && jump_times[jt] < tr) {
            if (path.t.empty() || jump_times[jt] > path.t.back()) {
                path.t.push_back(jump_times[jt]);
                path.regular_index.push_back(-1);
            }
            ++jt;
        }
        if (jt < jump_times.size() && jump_times[jt] == tr) ++jt; // regular point already there
        path.t.push_back(tr);
        path.regular_index.push_back(i);
    }

    // Gaussian + drift accumulation per cell; jumps land on their grid point.
    const Vec drift = triplet.b - triplet.nu.mean_small_jump();
    path.values.resize(path.t.size());
    path.values[0] = Vec::Zero(d);
    std::size_t mark = 0;
    for (std::size_t i = 0; i + 1 < path.t.size(); ++i) {
        const double dt = path.t[i + 1] - path.t[i];
        Vec inc = drift * dt;
        if (triplet.has_gaussian()) inc += triplet.sigma * (std::sqrt(dt) * rng.gaussian_vec(d));
        Vec value = path.values[i] + inc;
        const bool is_jump_time =
            mark < jump_times.size() && path.t[i + 1] == jump_times[mark];
        if (is_jump_time) {
            value += marks[mark];
            path.jumps.push_back(PathJump{i + 1, path.t[i + 1], marks[mark]});
            ++mark;
        }
        path.values[i + 1] = std::move(value);
    }
    path.validate();
    return path;
}

} // namespace mlevy
