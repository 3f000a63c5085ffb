#pragma once

#include <cmath>
#include <cstdint>

#include "mlevy/types.hpp"

namespace mlevy {

// Counter-based pseudo random stream (splitmix64 core). The n-th output is a
// pure function of (seed, stream, n), so independent substreams are cheap to
// derive: one per path index. All distributions below are hand-rolled so the
// byte stream does not depend on the standard library implementation.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ULL))) {}

    // Derive the substream for a path index from the same master seed.
    static RngStream substream(std::uint64_t seed, std::uint64_t index) {
        return RngStream(seed, index + 1);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in (0, 1]; safe as a log() argument.
    double uniform_pos() { return 1.0 - uniform(); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

    // Box-Muller, one spare value cached per stream.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u = uniform_pos();
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        spare_ = r * std::sin(2.0 * M_PI * v);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * v);
    }

    Vec gaussian_vec(int dim) {
        Vec z(dim);
        for (int i = 0; i < dim; ++i) z[i] = gaussian();
        return z;
    }

    // Knuth product method for small means, rounded normal tail for large
    // ones (same split used by Geant4-style samplers).
    std::uint64_t poisson(double mean) {
        if (mean <= 0.0) return 0;
        if (mean < 64.0) {
            const double limit = std::exp(-mean);
            std::uint64_t n = 0;
            double prod = uniform_pos();
            while (prod > limit) {
                ++n;
                prod *= uniform_pos();
            }
            return n;
        }
        const double x = mean + std::sqrt(mean) * gaussian() + 0.5;
        return x < 0.0 ? 0 : static_cast<std::uint64_t>(x);
    }

    // Uniform direction on the unit sphere in R^dim.
    Vec unit_direction(int dim) {
        while (true) {
            Vec z = gaussian_vec(dim);
            const double n = z.norm();
            if (n > 1e-12) return z / n;
        }
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xbf58476d1ce4e5b9ULL;
        z ^= z >> 27;
        z *= 0x94d049bb133111ebULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace mlevy
