#pragma once

/// Position-sizing ("activation") functions applied to a unit-variance
/// momentum factor, normalised so that <psi(Z)^2> = 1 for Z ~ N(0,1).
///
/// Built-ins: linear; simple sigmoid c (2 Phi(lambda z) - 1); reverting
/// sigmoid c z exp(-lambda^2 z^2 / 2); double-step c (1_{z>eps} - 1_{z<-eps});
/// and the compound sigmoid, a weighted blend of the two sigmoids on the
/// elliptical unit-norm constraint.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "tmom/cubic.hpp"
#include "tmom/gaussian.hpp"
#include "tmom/quadrature.hpp"

namespace tmom {

struct ActivationSpec {
    enum class Kind { linear, simple_sigmoid, reverting_sigmoid, double_step,
                      compound_sigmoid, custom };
    Kind kind = Kind::linear;
    double lambda = 0.0;  // sigmoid steepness / reversion scale
    double epsilon = 0.0; // double-step dead-zone half-width
    double w_simple = 0.0, w_reverting = 0.0; // compound weights (on the ellipse)
    double c = 1.0;       // normalisation constant
    std::function<double(double)> psi_raw;  // custom only
    std::function<double(double)> dpsi_raw; // custom only, optional
    std::vector<double> breaks;             // non-smooth points of psi

    /// Normalised position function.
    double operator()(double z) const {
        switch (kind) {
            case Kind::linear: return z;
            case Kind::simple_sigmoid:
                // 2 Phi(lambda z) - 1 = erf(lambda z / sqrt(2)), odd by construction
                return c * std::erf(lambda * z * 0.7071067811865475244);
            case Kind::reverting_sigmoid:
                return c * z * std::exp(-0.5 * lambda * lambda * z * z);
            case Kind::double_step:
                return z > epsilon ? c : (z < -epsilon ? -c : 0.0);
            case Kind::compound_sigmoid: {
                const double cs = simple_sigmoid_norm(lambda);
                const double cr = reverting_sigmoid_norm(lambda);
                return w_simple * cs * std::erf(lambda * z * 0.7071067811865475244) +
                       w_reverting * cr * z * std::exp(-0.5 * lambda * lambda * z * z);
            }
            case Kind::custom: return c * psi_raw(z);
        }
        return 0.0;
    }

    bool has_closed_hk() const {
        return kind == Kind::linear || kind == Kind::simple_sigmoid ||
               kind == Kind::reverting_sigmoid || kind == Kind::double_step;
    }

    static double simple_sigmoid_norm(double lambda) {
        return 1.0 / std::sqrt(2.0 / pi *
                               std::atan(lambda * lambda /
                                         std::sqrt(1.0 + 2.0 * lambda * lambda)));
    }
    static double reverting_sigmoid_norm(double lambda) {
        return std::pow(1.0 + 2.0 * lambda * lambda, 0.75);
    }
};

inline ActivationSpec activation_linear() {
    ActivationSpec s;
    s.kind = ActivationSpec::Kind::linear;
    s.c = 1.0;
    return s;
}

inline ActivationSpec activation_simple_sigmoid(double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("simple sigmoid: lambda must be > 0");
    ActivationSpec s;
    s.kind = ActivationSpec::Kind::simple_sigmoid;
    s.lambda = lambda;
    s.c = ActivationSpec::simple_sigmoid_norm(lambda);
    return s;
}

inline ActivationSpec activation_reverting_sigmoid(double lambda) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("reverting sigmoid: lambda must be > 0");
    ActivationSpec s;
    s.kind = ActivationSpec::Kind::reverting_sigmoid;
    s.lambda = lambda;
    s.c = ActivationSpec::reverting_sigmoid_norm(lambda);
    return s;
}

inline ActivationSpec activation_double_step(double epsilon) {
    if (epsilon < 0.0) throw std::invalid_argument("double step: epsilon must be >= 0");
    ActivationSpec s;
    s.kind = ActivationSpec::Kind::double_step;
    s.epsilon = epsilon;
    s.c = 1.0 / std::sqrt(2.0 * normal_cdf(-epsilon));
    s.breaks = {-epsilon, epsilon};
    return s;
}

/// Custom activation; the normalisation constant comes from quadrature,
/// so psi^2 must be integrable against the normal density.
inline ActivationSpec activation_custom(std::function<double(double)> psi,
                                        std::function<double(double)> dpsi = {},
                                        std::vector<double> breaks = {}) {
    ActivationSpec s;
    s.kind = ActivationSpec::Kind::custom;
    s.psi_raw = std::move(psi);
    s.dpsi_raw = std::move(dpsi);
    s.breaks = std::move(breaks);
    const double m2 =
        normal_expectation([&](double z) { const double v = s.psi_raw(z); return v * v; },
                           s.breaks, 1e-12);
    if (!(m2 > 0.0) || !std::isfinite(m2))
        throw std::invalid_argument("custom activation: psi^2 not normalisable");
    s.c = 1.0 / std::sqrt(m2);
    return s;
}

/// Correlation <psi_S(Z) psi_R(Z)> between the unit-normalised simple and
/// reverting sigmoids of common steepness lambda.
inline double sigmoid_pair_correlation(double lambda) {
    return lambda * std::pow(1.0 + 2.0 * lambda * lambda, 0.25) /
           (1.0 + lambda * lambda) /
           std::sqrt(std::atan(lambda * lambda / std::sqrt(1.0 + 2.0 * lambda * lambda)));
}

/// Compound sigmoid with weight ratio w_R/w_S >= 0 (infinity for the pure
/// reverting case); weights solve the elliptical unit-norm constraint
/// wS^2 + 2 wS wR cos(delta) + wR^2 = 1.
inline ActivationSpec compound_sigmoid_make(double ratio, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("compound sigmoid: lambda must be > 0");
    if (ratio < 0.0) throw std::invalid_argument("compound sigmoid: ratio must be >= 0");
    ActivationSpec s;
    s.kind = ActivationSpec::Kind::compound_sigmoid;
    s.lambda = lambda;
    if (std::isinf(ratio)) {
        s.w_simple = 0.0;
        s.w_reverting = 1.0;
    } else {
        const double cd = sigmoid_pair_correlation(lambda);
        s.w_simple = 1.0 / std::sqrt(1.0 + 2.0 * ratio * cd + ratio * ratio);
        s.w_reverting = ratio * s.w_simple;
    }
    s.c = 1.0;
    return s;
}

/// Normalisation constant for a spec (closed form for built-ins, quadrature
/// for custom). Built-ins carry it already; this recomputes for checking.
inline double normalization_constant(const ActivationSpec& spec) {
    using K = ActivationSpec::Kind;
    switch (spec.kind) {
        case K::linear: return 1.0;
        case K::simple_sigmoid: return ActivationSpec::simple_sigmoid_norm(spec.lambda);
        case K::reverting_sigmoid:
            return ActivationSpec::reverting_sigmoid_norm(spec.lambda);
        case K::double_step: return 1.0 / std::sqrt(2.0 * normal_cdf(-spec.epsilon));
        case K::compound_sigmoid: return 1.0; // weights absorb the normalisation
        case K::custom: {
            const double m2 = normal_expectation(
                [&](double z) { const double v = spec.psi_raw(z); return v * v; },
                spec.breaks, 1e-12);
            return 1.0 / std::sqrt(m2);
        }
    }
    return 1.0;
}

/// Threshold steepness for the reverting sigmoid above which the long-period
/// skewness turns negative (slow-EMA1 continuum estimate): the positive root
/// of 2 + 9 x + 7 x^2 - 8 x^3 in x = lambda^2, about 1.65, so lambda ~ 1.285.
inline double reverting_positivity_threshold() {
    const CubicRoots r = solve_cubic(-8.0, 7.0, 9.0, 2.0);
    for (const auto& z : r.roots)
        if (z.imag() == 0.0 && z.real() > 0.0) return std::sqrt(z.real());
    throw std::logic_error("reverting_positivity_threshold: no positive root");
}

} // namespace tmom
