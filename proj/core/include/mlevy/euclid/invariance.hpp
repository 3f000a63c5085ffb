#pragma once

#include <string>
#include <vector>

#include "mlevy/euclid/triplet.hpp"
#include "mlevy/stats.hpp"

namespace mlevy {

struct ConditionResult {
    bool pass = false;
    bool exact = false;      // algebra / closed form rather than Monte Carlo
    double statistic = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct ElementInvariance {
    Mat g;
    ConditionResult diffusion; // g a g^T = a
    ConditionResult measure;   // pushforward of nu equals nu
    ConditionResult drift;     // g b = b + cutoff correction integral
    bool pass = false;
};

struct InvarianceReport {
    std::vector<ElementInvariance> elements;
    bool pass = false;
};

// Check the triplet against a list of group elements. The diffusion
// condition is exact matrix algebra at tolerance `tol`; the measure
// condition is exact for atom lists and otherwise an energy-distance
// permutation test at level 0.01 with n_mc samples per side; the drift
// condition evaluates the cutoff correction integral exactly for atoms and
// by Monte Carlo with n_mc samples otherwise.
InvarianceReport check_invariance(const LevyTriplet& triplet, const std::vector<Mat>& group,
                                  int n_mc, double tol, std::uint64_t seed = 0);

// Transport Poisson atoms (t, x) -> (t, g(t) x); times are untouched.
std::vector<std::pair<double, Vec>> pushforward_atoms(
    const std::vector<std::pair<double, Vec>>& atoms,
    const std::function<Mat(double)>& g_process);

} // namespace mlevy
