#pragma once

#include <vector>

#include "mlevy/rng.hpp"
#include "mlevy/types.hpp"

namespace mlevy {

// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

// Survival function of a chi-square variable with dof degrees of freedom.
double chi_square_sf(double x, int dof);

// Szekely-Rizzo energy statistic between two samples in R^d.
double energy_distance(const std::vector<Vec>& a, const std::vector<Vec>& b);

struct TwoSampleResult {
    double statistic = 0.0;
    double threshold = 0.0; // permutation quantile at the requested level
    double p_value = 1.0;
    bool pass = false;      // statistic below threshold
};

// Permutation test for equality in distribution based on the energy
// statistic. `level` is the rejection level (pass means p > level).
TwoSampleResult energy_permutation_test(const std::vector<Vec>& a, const std::vector<Vec>& b,
                                        int n_permutations, double level, RngStream& rng);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

// Goodness of fit of observed counts against expected counts (same total).
ChiSquareResult chi_square_gof(const std::vector<double>& observed,
                               const std::vector<double>& expected);

// Two-sample homogeneity test on binned counts.
ChiSquareResult chi_square_two_sample(const std::vector<double>& counts_a,
                                      const std::vector<double>& counts_b);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct MeanStd {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

MeanStd mean_std_error(const std::vector<double>& xs);

} // namespace mlevy
