#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "mlevy/errors.hpp"
#include "mlevy/rng.hpp"
#include "mlevy/types.hpp"

namespace mlevy {

enum class MeasureKind {
    point_masses,
    uniform_sphere_shell,
    gaussian_radial,
    truncated_stable,
};

struct PointMass {
    Vec x;
    double weight = 0.0;
};

// Jump (Levy) measure of a driving triplet. The first three kinds are
// finite-activity. truncated_stable has the radial density
// scale * r^(-1-alpha) on 0 < r < support_radius (spread uniformly over
// directions when dim > 1); only jumps with r >= eps are sampled and the
// dropped compensated part is quantified by small_jump_truncation_bias.
struct JumpMeasureSpec {
    MeasureKind kind = MeasureKind::point_masses;
    int dim = 1;

    std::vector<PointMass> atoms;

    double radius = 1.0;     // uniform_sphere_shell
    double sigma = 1.0;      // gaussian_radial
    double intensity = 1.0;  // total mass of the finite-activity kinds

    double stable_index = 0.5;
    double eps = 1e-2;
    double support_radius = 1.0;
    double scale = 1.0;
    bool one_sided = false;  // truncated_stable, dim == 1 only

    void validate() const;

    bool finite_activity() const { return kind != MeasureKind::truncated_stable; }

    // Mass of the sampled part (eps-truncated for truncated_stable).
    double total_intensity() const;

    // One jump; never the zero vector.
    Vec sample(RngStream& rng) const;

    // Integral of x over {|x| < 1} of the sampled part; closed form per
    // kind. This is the compensator of small jumps entering the drift.
    Vec mean_small_jump() const;

    // Integral of |x|^2 below radius r of the full measure (including the
    // part below eps for truncated_stable).
    double second_moment_below(double r) const;
};

// L2 truncation bias per unit time of dropping compensated jumps below eps.
double small_jump_truncation_bias(const JumpMeasureSpec& nu, double eps);

void to_json(nlohmann::json& j, const JumpMeasureSpec& nu);
void from_json(const nlohmann::json& j, JumpMeasureSpec& nu);

// Convenience constructors used across tests and the manifold catalog.
JumpMeasureSpec make_point_masses(std::vector<PointMass> atoms);
JumpMeasureSpec make_two_atoms(const Vec& x, double weight_each);
JumpMeasureSpec make_sphere_shell(int dim, double radius, double intensity);
JumpMeasureSpec make_gaussian_radial(int dim, double sigma, double intensity);

} // namespace mlevy
