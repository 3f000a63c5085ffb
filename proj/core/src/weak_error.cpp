#include "mlevy/gen/generator.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace mlevy {

WeakErrorReport weak_error_test(const ManifoldSpec& m, const LevyTriplet& triplet,
                                const TestFunction& f, const ChartPoint& p, const FramePoint& v,
                                double t_small, std::size_t n_paths, const WeakTestConfig& config,
                                std::uint64_t seed) {
    if (t_small <= 0.0) throw Error("weak_error_test: t_small must be positive");
    if (!same_point(m, p, ChartPoint{v.chart, v.x}, 1e-9))
        throw Error("weak_error_test: frame does not sit over the requested point");

    // Fixed-size blocks reduced in block order: the estimate depends only on
    // (seed, n_paths), not on how many workers run.
    constexpr std::size_t kBlock = 1024;
    const std::size_t n_blocks = (n_paths + kBlock - 1) / kBlock;
    struct BlockSums {
        double sum = 0.0;
        double sum_sq = 0.0;
        std::size_t stopped = 0;
    };
    std::vector<BlockSums> blocks(n_blocks);

    std::atomic<std::size_t> next_block{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t b = next_block.fetch_add(1);
            if (b >= n_blocks) return;
            BlockSums sums;
            const std::size_t lo = b * kBlock;
            const std::size_t hi = std::min(n_paths, lo + kBlock);
            for (std::size_t i = lo; i < hi; ++i) {
                RngStream rng(seed, i);
                const EuclidPath driver =
                    sample_levy_path(triplet, t_small, config.sim.grid_step, rng);
                const TerminalResult terminal =
                    marcus_terminal(m, driver, v, config.sim.marcus);
                if (terminal.stopped) {
                    ++sums.stopped;
                    continue;
                }
                const double val = f.on_manifold(ChartPoint{terminal.u.chart, terminal.u.x});
                sums.sum += val;
                sums.sum_sq += val * val;
            }
            blocks[b] = sums;
        }
    };

    unsigned hw = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
    hw = std::min<unsigned>(hw, 16);
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < hw; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    double sum = 0.0, sum_sq = 0.0;
    std::size_t stopped = 0;
    for (const BlockSums& bs : blocks) {
        sum += bs.sum;
        sum_sq += bs.sum_sq;
        stopped += bs.stopped;
    }
    const std::size_t used = n_paths - stopped;

    WeakErrorReport report;
    report.n_paths = n_paths;
    report.stopped = stopped;
    report.valid = stopped * 100 <= n_paths;
    if (used == 0) {
        report.valid = false;
        return report;
    }
    const double mean = sum / static_cast<double>(used);
    const double var =
        std::max(0.0, sum_sq / static_cast<double>(used) - mean * mean);
    const double fp = f.on_manifold(p);
    report.estimate = (mean - fp) / t_small;
    report.std_error = std::sqrt(var / static_cast<double>(used)) / t_small;
    report.generator_value = generator_apply(m, triplet, f, p, v, config.quad);
    report.discrepancy = std::abs(report.estimate - report.generator_value);
    return report;
}

} // namespace mlevy
