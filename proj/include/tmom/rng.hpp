#pragma once

/// Reproducible random number generation for the simulation engine.
///
/// Stream identity (part of the output contract): path p of a run with seed s
/// uses a std::mt19937_64 engine seeded with
/// splitmix64(s + 0x9E3779B97F4A7C15 * (p + 1)); uniforms come from the top
/// 53 bits; normals from the two-uniform Box-Muller transform. All draws are
/// fully specified by the standard, so identical (seed, config) give
/// identical bytes on any conforming platform.

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "tmom/gaussian.hpp"

namespace tmom {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed + 0x9E3779B97F4A7C15ULL * (index + 1));
}

inline std::mt19937_64 make_path_rng(std::uint64_t seed, std::uint64_t path_index) {
    return std::mt19937_64(substream_seed(seed, path_index));
}

/// Uniform on [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal sampler (Box-Muller, pair-cached).
class NormalSampler {
public:
    double operator()(std::mt19937_64& rng) {
        if (have_) {
            have_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01(rng); // (0, 1]
        const double u2 = uniform01(rng);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * pi * u2;
        spare_ = r * std::sin(a);
        have_ = true;
        return r * std::cos(a);
    }
    void reset() { have_ = false; }

private:
    double spare_ = 0.0;
    bool have_ = false;
};

enum class ReturnDistribution { gaussian, rademacher, uniform_scaled, student_t };

/// i.i.d. risk-adjusted return draws with first three moments exactly
/// (0, 1, 0). student_t is standardised to unit variance; dof > 6 keeps the
/// sixth moment (entering skewness standard errors) finite.
class ReturnSampler {
public:
    explicit ReturnSampler(ReturnDistribution kind, int student_dof = 8)
        : kind_(kind), dof_(student_dof) {
        if (kind_ == ReturnDistribution::student_t && dof_ <= 6)
            throw std::invalid_argument("student_t returns need dof > 6");
    }

    double operator()(std::mt19937_64& rng) {
        switch (kind_) {
            case ReturnDistribution::gaussian:
                return normal_(rng);
            case ReturnDistribution::rademacher:
                return (rng() >> 63) ? 1.0 : -1.0;
            case ReturnDistribution::uniform_scaled:
                return (2.0 * uniform01(rng) - 1.0) * 1.7320508075688772935;
            case ReturnDistribution::student_t: {
                const double z = normal_(rng);
                double chi2 = 0.0;
                for (int i = 0; i < dof_; ++i) {
                    const double g = normal_(rng);
                    chi2 += g * g;
                }
                // t scaled by sqrt((dof-2)/dof) has unit variance
                return z / std::sqrt(chi2 / dof_) *
                       std::sqrt((dof_ - 2.0) / dof_);
            }
        }
        return 0.0;
    }

    ReturnDistribution kind() const { return kind_; }
    void reset() { normal_.reset(); }

private:
    ReturnDistribution kind_;
    int dof_;
    NormalSampler normal_;
};

} // namespace tmom
