#pragma once

#include <nlohmann/json_fwd.hpp>

#include "mlevy/euclid/measure.hpp"
#include "mlevy/types.hpp"

namespace mlevy {

// Generating triplet (a, nu, b) of a Euclidean Levy process, with the jump
// cutoff fixed at 1(|x| < 1). sigma is a factor of a kept alongside so the
// Gaussian part is sampled consistently.
struct LevyTriplet {
    Mat a;
    Mat sigma;
    Vec b;
    JumpMeasureSpec nu;

    int dim() const { return static_cast<int>(b.size()); }
    bool has_gaussian() const { return a.cwiseAbs().maxCoeff() > 0.0; }
    bool has_jumps() const { return nu.total_intensity() > 0.0; }

    void validate() const;
};

LevyTriplet make_triplet(Mat a, Vec b, JumpMeasureSpec nu);

// Zero-jump helper; the measure is an atom list left empty.
LevyTriplet make_continuous_triplet(Mat a, Vec b);

void to_json(nlohmann::json& j, const LevyTriplet& t);
void from_json(const nlohmann::json& j, LevyTriplet& t);

} // namespace mlevy
