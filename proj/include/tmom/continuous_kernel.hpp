#pragma once

/// Continuous-time counterparts of the EMA filters: kernels K(t), their
/// square-norms, and the path-length classification that separates EMA1
/// (infinite turnover) from the crossover kernels (finite turnover).

#include <cmath>
#include <stdexcept>

#include "tmom/gaussian.hpp"

namespace tmom {

struct ContinuousKernel {
    enum class Kind { ema1, ema2, ema2_equal };
    Kind kind;
    double alpha_rate; // 1/time
    double beta_rate;  // 1/time, EMA2 only (beta > alpha)
};

inline ContinuousKernel make_kernel_ema1(double alpha_rate) {
    if (!(alpha_rate > 0.0)) throw std::invalid_argument("kernel: rate must be > 0");
    return {ContinuousKernel::Kind::ema1, alpha_rate, 0.0};
}

inline ContinuousKernel make_kernel_ema2(double alpha_rate, double beta_rate) {
    if (!(alpha_rate > 0.0) || !(beta_rate > alpha_rate))
        throw std::invalid_argument("kernel: need beta > alpha > 0");
    return {ContinuousKernel::Kind::ema2, alpha_rate, beta_rate};
}

inline ContinuousKernel make_kernel_ema2_equal(double alpha_rate) {
    if (!(alpha_rate > 0.0)) throw std::invalid_argument("kernel: rate must be > 0");
    return {ContinuousKernel::Kind::ema2_equal, alpha_rate, 0.0};
}

inline double kernel_value(const ContinuousKernel& k, double t) {
    switch (k.kind) {
        case ContinuousKernel::Kind::ema1:
            return std::exp(-k.alpha_rate * t);
        case ContinuousKernel::Kind::ema2:
            return std::exp(-k.alpha_rate * t) - std::exp(-k.beta_rate * t);
        case ContinuousKernel::Kind::ema2_equal:
            return t * std::exp(-k.alpha_rate * t);
    }
    return 0.0;
}

/// ||K||^2 = integral of K(t)^2 over t >= 0.
inline double square_norm(const ContinuousKernel& k) {
    const double a = k.alpha_rate, b = k.beta_rate;
    switch (k.kind) {
        case ContinuousKernel::Kind::ema1:
            return 1.0 / (2.0 * a);
        case ContinuousKernel::Kind::ema2:
            return (a - b) * (a - b) / (2.0 * a * b * (a + b));
        case ContinuousKernel::Kind::ema2_equal:
            return 1.0 / (4.0 * a * a * a);
    }
    return 0.0;
}

/// ||K'||^2, finite only when K(0) = 0.
inline double derivative_square_norm(const ContinuousKernel& k) {
    const double a = k.alpha_rate, b = k.beta_rate;
    switch (k.kind) {
        case ContinuousKernel::Kind::ema1:
            return a / 2.0; // finite, but the jump at t=0 dominates turnover
        case ContinuousKernel::Kind::ema2:
            return (a - b) * (a - b) / (2.0 * (a + b));
        case ContinuousKernel::Kind::ema2_equal:
            return 1.0 / (4.0 * a);
    }
    return 0.0;
}

struct PathLengthClass {
    bool finite;
    double turnover_rate; // (2 ||K'||^2 / pi)^{1/2} when finite, else unset (0)
};

/// Path length of the filtered Brownian signal is infinite iff K(0) != 0.
inline PathLengthClass path_length_class(const ContinuousKernel& k) {
    if (kernel_value(k, 0.0) != 0.0) return {false, 0.0};
    return {true, std::sqrt(2.0 * derivative_square_norm(k) / pi)};
}

/// Residual of K'' + (lambda + mu/t) K = 0 for K(t) = t e^{-rate t}, with
/// lambda = -rate^2 and mu = 2 rate. Zero to machine precision for t > 0.
inline double variational_residual(double rate, double t) {
    if (!(t > 0.0)) throw std::invalid_argument("variational_residual: t must be > 0");
    const double e = std::exp(-rate * t);
    const double kpp = (rate * rate * t - 2.0 * rate) * e;
    const double kv = t * e;
    return kpp + (-rate * rate + 2.0 * rate / t) * kv;
}

} // namespace tmom
