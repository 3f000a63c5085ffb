#include "mlevy/euclid/path.hpp"

#include <algorithm>

#include "mlevy/errors.hpp"

namespace mlevy {

const PathJump* EuclidPath::jump_at(std::size_t index) const {
    // jump list is sorted by index; binary search
    auto it = std::lower_bound(jumps.begin(), jumps.end(), index,
                               [](const PathJump& j, std::size_t i) { return j.index < i; });
    if (it != jumps.end() && it->index == index) return &*it;
    return nullptr;
}

Vec EuclidPath::value_pre(std::size_t index) const {
    if (const PathJump* j = jump_at(index)) return values[index] - j->delta;
    return values[index];
}

Vec EuclidPath::continuous_increment(std::size_t i) const {
    Vec inc = values[i + 1] - values[i];
    if (const PathJump* j = jump_at(i + 1)) inc -= j->delta;
    return inc;
}

void EuclidPath::validate() const {
    if (t.size() != values.size() || t.size() != regular_index.size())
        throw Error("path arrays disagree in length");
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        if (!(t[i + 1] > t[i])) throw Error("path grid must be strictly increasing");
    std::size_t prev = 0;
    bool first = true;
    for (const PathJump& j : jumps) {
        if (j.index >= t.size() || j.index == 0) throw Error("jump index out of range");
        if (!first && j.index <= prev) throw Error("jump list must be sorted");
        if (j.t != t[j.index]) throw Error("jump time disagrees with the grid");
        prev = j.index;
        first = false;
    }
}

EuclidPath coarsen(const EuclidPath& fine, int factor) {
    if (factor < 1) throw Error("coarsen factor must be >= 1");
    EuclidPath out;
    std::vector<std::size_t> new_index(fine.size(), 0);
    for (std::size_t i = 0; i < fine.size(); ++i) {
        const bool regular_keep =
            fine.regular_index[i] >= 0 && fine.regular_index[i] % factor == 0;
        const bool is_jump = fine.jump_at(i) != nullptr;
        const bool last = i + 1 == fine.size();
        if (!(i == 0 || regular_keep || is_jump || last)) continue;
        new_index[i] = out.t.size();
        out.t.push_back(fine.t[i]);
        out.values.push_back(fine.values[i]);
        out.regular_index.push_back(regular_keep ? fine.regular_index[i] / factor : -1);
    }
    for (const PathJump& j : fine.jumps)
        out.jumps.push_back(PathJump{new_index[j.index], j.t, j.delta});
    return out;
}

EuclidPath linear_map(const EuclidPath& path, const Mat& g) {
    EuclidPath out = path;
    for (Vec& v : out.values) v = g * v;
    for (PathJump& j : out.jumps) j.delta = g * j.delta;
    return out;
}

} // namespace mlevy
