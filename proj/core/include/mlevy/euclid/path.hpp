#pragma once

#include <cstdint>
#include <vector>

#include "mlevy/types.hpp"

namespace mlevy {

struct PathJump {
    std::size_t index = 0; // grid index whose value includes the jump
    double t = 0.0;
    Vec delta;
};

// Cadlag path on a time grid. values[i] is the right limit at t[i]; a jump
// at t[i] is listed in `jumps` and the left limit is values[i] - delta.
// regular_index maps a grid entry back to the uniform grid (-1 for grid
// points inserted at jump times), which refinement tests use to coarsen.
struct EuclidPath {
    std::vector<double> t;
    std::vector<Vec> values;
    std::vector<PathJump> jumps;
    std::vector<std::int64_t> regular_index;

    std::size_t size() const { return t.size(); }
    double horizon() const { return t.empty() ? 0.0 : t.back(); }
    int dim() const { return values.empty() ? 0 : static_cast<int>(values.front().size()); }

    const PathJump* jump_at(std::size_t index) const;
    Vec value_pre(std::size_t index) const;

    // Increment of the continuous part over (t[i], t[i+1]].
    Vec continuous_increment(std::size_t i) const;

    void validate() const;
};

// Same path on the sub-grid keeping every `factor`-th regular point plus
// all jump times.
EuclidPath coarsen(const EuclidPath& fine, int factor);

// Left-multiply all values and jumps by a fixed matrix.
EuclidPath linear_map(const EuclidPath& path, const Mat& g);

} // namespace mlevy
