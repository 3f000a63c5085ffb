#pragma once

#include "mlevy/euclid/path.hpp"
#include "mlevy/euclid/triplet.hpp"
#include "mlevy/rng.hpp"

namespace mlevy {

// Sample a driver path on [0, horizon] by the Levy-Ito decomposition:
// drift (with the small-jump compensator folded in), exact Gaussian cell
// increments, and Poisson jump times inserted into the uniform grid.
// Deterministic in the stream state.
EuclidPath sample_levy_path(const LevyTriplet& triplet, double horizon, double grid_step,
                            RngStream& rng);

} // namespace mlevy
