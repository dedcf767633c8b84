#pragma once

/// Third-moment building blocks H_k for nonlinear strategies and the skewness
/// term structure assembled from them. H_k is the expectation
///     2 a_{k-1} E[ psi(Z1)^2 psi(Z2) (Z1 - rho Z2) / (2 (1 - rho^2)) ]
/// over the bivariate normal with correlation rho = R^a_k. Closed forms cover
/// the three basic activation families; the derivative-free quadrature route
/// works for any activation (including discontinuous ones) and serves as the
/// independent oracle.

#include <cmath>
#include <stdexcept>

#include "tmom/activation.hpp"
#include "tmom/gaussian.hpp"
#include "tmom/linear_filter.hpp"
#include "tmom/quadrature.hpp"
#include "tmom/term_structure.hpp"

namespace tmom {

struct HkContext {
    double a_prev; // a_{k-1}
    double rho;    // R^a_k, strictly inside (-1, 1)
};

namespace detail {

inline void require_rho(double rho) {
    if (!(std::abs(rho) < 1.0))
        throw std::invalid_argument("H_k: |rho| must be < 1 (the rho = +-1 limit "
                                    "is irregular and cannot occur here)");
}

} // namespace detail

/// Closed-form H_k for linear / simple sigmoid / reverting sigmoid /
/// double-step activations.
inline double h_k_closed(const ActivationSpec& spec, const HkContext& ctx) {
    detail::require_rho(ctx.rho);
    const double a = ctx.a_prev, rho = ctx.rho;
    using K = ActivationSpec::Kind;
    switch (spec.kind) {
        case K::linear:
            return 2.0 * a * rho;
        case K::simple_sigmoid: {
            const double l = spec.lambda, l2 = l * l;
            const double c3 = spec.c * spec.c * spec.c;
            const double denom =
                std::sqrt(1.0 + 3.0 * l2 + 2.0 * (1.0 - rho * rho) * l2 * l2);
            const double arg = l2 * rho / (std::sqrt(1.0 + l2) * denom);
            return 2.0 * a * c3 * std::pow(2.0 / pi, 1.5) * l /
                   std::sqrt(1.0 + l2) * std::atan(arg);
        }
        case K::reverting_sigmoid: {
            const double l2 = spec.lambda * spec.lambda;
            const double c3 = spec.c * spec.c * spec.c;
            const double q = 1.0 + 3.0 * l2 + 2.0 * (1.0 - rho * rho) * l2 * l2;
            return 2.0 * a * c3 * rho * (1.0 - (1.0 - rho * rho) * l2 * l2) /
                   std::pow(q, 2.5);
        }
        case K::double_step: {
            const double e = spec.epsilon;
            const double c3 = spec.c * spec.c * spec.c;
            const double up = std::sqrt((1.0 + rho) / (1.0 - rho));
            return 2.0 * a * c3 * normal_pdf(e) *
                   (normal_cdf(e * up) - normal_cdf(e / up));
        }
        default:
            throw std::invalid_argument(
                "h_k_closed: no closed form for this activation; use h_k_quadrature");
    }
}

/// H_k by nested quadrature of the derivative-free expectation, valid for
/// discontinuous psi. Conditioning Z2 = rho Z1 + sqrt(1-rho^2) W turns it into
/// two nested one-dimensional normal expectations with known break points.
inline double h_k_quadrature(const ActivationSpec& spec, const HkContext& ctx,
                             double tol = 1e-10) {
    detail::require_rho(ctx.rho);
    const double rho = ctx.rho;
    const double s = std::sqrt(1.0 - rho * rho);
    auto inner = [&](double z1) {
        std::vector<double> wbreaks;
        for (double b : spec.breaks) wbreaks.push_back((b - rho * z1) / s);
        return normal_expectation(
            [&](double w) {
                const double z2 = rho * z1 + s * w;
                return spec(z2) * (z1 - rho * z2);
            },
            wbreaks, tol * 0.02);
    };
    const double outer = normal_expectation(
        [&](double z1) {
            const double p = spec(z1);
            return p * p * inner(z1);
        },
        spec.breaks, tol);
    return 2.0 * ctx.a_prev * outer / (2.0 * (1.0 - rho * rho));
}

struct NonlinearTermStructure {
    MomentTermStructure ts;
    bool used_quadrature = false;
};

/// Term structure of the nonlinear strategy on a normalised filter:
/// mu2(P) = P, mu3(P) = Theta_P by the recursion S_P = S_{P-1} + H_{P-1},
/// Theta_P = Theta_{P-1} + 3 S_P.
inline NonlinearTermStructure nonlinear_term_structure(const LinearFilter& f,
                                                       const ActivationSpec& spec,
                                                       long pmax) {
    if (pmax < 1)
        throw std::invalid_argument("nonlinear_term_structure: Pmax must be >= 1");
    if (!f.normalized || std::abs(autocovariance(f, 0) - 1.0) > 1e-9)
        throw std::invalid_argument(
            "nonlinear_term_structure: filter must be normalised (R_0 = 1)");
    NonlinearTermStructure out;
    out.used_quadrature = !spec.has_closed_hk();
    const std::vector<double> w = weights(f, pmax);
    double s_run = 0.0, theta = 0.0;
    out.ts.periods.push_back(1);
    out.ts.mu2.push_back(1.0);
    out.ts.mu3.push_back(0.0);
    out.ts.kappa3.push_back(0.0);
    for (long p = 2; p <= pmax; ++p) {
        const HkContext ctx{w[static_cast<std::size_t>(p - 2)],
                            autocovariance(f, p - 1)};
        const double hk = spec.has_closed_hk() ? h_k_closed(spec, ctx)
                                               : h_k_quadrature(spec, ctx);
        s_run += hk;
        theta += 3.0 * s_run;
        out.ts.periods.push_back(p);
        out.ts.mu2.push_back(double(p));
        out.ts.mu3.push_back(theta);
        out.ts.kappa3.push_back(theta / std::pow(double(p), 1.5));
    }
    return out;
}

} // namespace tmom
