#pragma once

#include "mlevy/manifolds/catalog.hpp"
#include "mlevy/stats.hpp"

namespace mlevy {

struct LieCompareConfig {
    MarcusConfig marcus;
    double grid_step = 1.0 / kDefaultStepsPerUnit;
    int energy_subsample = 2000; // per side, permutation test budget
    int energy_permutations = 200;
    int histogram_bins = 16;
};

struct LieCompareReport {
    std::size_t n_paths = 0;
    double max_jump_defect = 0.0;  // sup |X_s - X_{s-} exp(hat dY)| over all jumps
    TwoSampleResult terminal_test; // Marcus vs increment-product terminal law
    ChiSquareResult jump_pushforward; // Marcus jump increments vs exp-pushforward samples
    bool pass = false;
};

// Simulate a Levy process on the group two ways: the Marcus solve on the
// left-invariant-connection manifold, and the direct product of increments
// X <- X exp(hat dY) (Strang-split drift around the Gaussian part). Both
// routes consume identical driver paths per index.
LieCompareReport lie_marcus_vs_increment(const BuiltManifold& lie, const LevyTriplet& triplet,
                                         double horizon, std::size_t n_paths,
                                         const LieCompareConfig& config, std::uint64_t seed);

} // namespace mlevy
