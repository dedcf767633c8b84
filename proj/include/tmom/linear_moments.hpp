#pragma once

/// Second and third moments of P-period trading returns for linear strategies,
/// by direct summation and by residue-calculus closed forms, plus the skewness
/// term structure, its large-P asymptotics, and the hybrid positivity
/// constraint for fast/slow crossover mixtures.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "tmom/cubic.hpp"
#include "tmom/linear_filter.hpp"
#include "tmom/term_structure.hpp"

namespace tmom {

/// mu_2(P) = P * R^a_0.
inline double second_moment(const LinearFilter& f, long period) {
    if (period < 1) throw std::invalid_argument("second_moment: P must be >= 1");
    return double(period) * autocovariance(f, 0);
}

/// mu_3(P) = 6 sum_{k=1}^{P-1} (P-k) a_{k-1} R^a_k by direct summation.
/// This is the oracle route: O(P) terms, each exact.
inline double third_moment_direct(const LinearFilter& f, long period) {
    if (period < 1) throw std::invalid_argument("third_moment_direct: P must be >= 1");
    const std::vector<double> w = weights(f, period);
    double acc = 0.0;
    for (long k = 1; k < period; ++k)
        acc += double(period - k) * w[static_cast<std::size_t>(k - 1)] *
               autocovariance(f, k);
    return 6.0 * acc;
}

namespace detail {

/// A1 = sum_{k=1}^{P-1} k r^k, A2 = sum k^2 r^k, A3 = sum k^3 r^k (closed form).
struct PowerSums {
    double a1, a2, a3;
};

inline PowerSums truncated_power_sums(double r, double period) {
    const double p = period;
    const double d = 1.0 - r;
    const double rp = std::pow(r, p);
    PowerSums s;
    s.a1 = (r - rp * (p * d + r)) / (d * d);
    s.a2 = (r * (1.0 + r) - rp * (p * p * d * d + 2.0 * p * r * d + r * (1.0 + r))) /
           (d * d * d);
    const double g = r * (r * r + 4.0 * r + 1.0);
    s.a3 = (g - rp * (p * p * p * d * d * d + 3.0 * p * p * r * d * d +
                      3.0 * p * r * d * (1.0 + r) + g)) /
           (d * d * d * d);
    return s;
}

/// Closed-form third moment for the coalesced (equal-speed) crossover,
/// weights a_j = gain (j+1) alpha^j: the beta->alpha limit of the pole-sum
/// expression, evaluated without splitting the double pole.
inline double third_moment_coalesced(const LinearFilter& f, long period) {
    const double alpha = f.poles.empty() ? 0.0 : f.poles[0].real();
    if (alpha == 0.0) return 0.0; // pure pass-through: R_k = 0 for k >= 1
    const double g = f.gain;
    const double r = alpha * alpha;
    const double d = 1.0 - r;
    const double c0 = (1.0 + r) / (d * d * d);
    const double c1 = 1.0 / (d * d);
    const PowerSums s = truncated_power_sums(r, double(period));
    const double s1 = double(period) * s.a1 - s.a2;
    const double s2 = double(period) * s.a2 - s.a3;
    return 6.0 * g * g * g / alpha * (c0 * s1 + c1 * s2);
}

inline void require_sprz(const LinearFilter& f, const char* who) {
    const SprzReport rep = sprz_check(f);
    if (!rep.pass)
        throw std::invalid_argument(std::string(who) + ": filter fails SPRZ: " +
                                    rep.message);
}

/// A(0) of the rational continuation, gain included.
inline cdouble origin_value(const LinearFilter& f) {
    cdouble v{f.a0, 0.0};
    for (std::size_t p = 0; p < f.poles.size(); ++p)
        v -= f.residues[p] / f.poles[p];
    return f.gain * v;
}

} // namespace detail

/// mu_3(P) via the pole-sum closed form (cost independent of P); the direct
/// sum is the independent check. Simple-pole filters use residue calculus;
/// the coalesced crossover uses its explicit limit formula.
inline double third_moment_closed(const LinearFilter& f, long period) {
    if (period < 1) throw std::invalid_argument("third_moment_closed: P must be >= 1");
    if (period == 1) return 0.0; // empty sum; exact for every filter
    if (f.has_second_order()) {
        if (f.poles.size() != 1)
            throw std::invalid_argument(
                "third_moment_closed: general multiple-pole filters unsupported");
        return detail::third_moment_coalesced(f, period);
    }
    detail::require_sprz(f, "third_moment_closed");
    const std::size_t m = f.poles.size();
    if (m == 0) return 0.0;
    std::vector<cdouble> avals(m);
    for (std::size_t j = 0; j < m; ++j)
        avals[j] = system_value(f, 1.0 / f.poles[j]);
    const cdouble a_origin = detail::origin_value(f);
    cdouble t1{}, t2{}, t3{};
    for (std::size_t j = 0; j < m; ++j) {
        const cdouble rj = f.gain * f.residues[j];
        t1 += rj * avals[j] * avals[j];
        t2 += rj * avals[j];
        for (std::size_t k = 0; k < m; ++k) {
            const cdouble rk = f.gain * f.residues[k];
            const cdouble ajk = f.poles[j] * f.poles[k];
            const cdouble one{1.0, 0.0};
            const cdouble tail =
                (one - std::pow(f.poles[j], double(period)) *
                           std::pow(f.poles[k], double(period))) /
                ((one - ajk) * (one - ajk));
            t3 += rj * rk / f.poles[j] * avals[k] * tail;
        }
    }
    const cdouble total = 6.0 * (double(period) * t1 - a_origin * t2 - t3);
    return detail::discard_imag(total, "third_moment_closed");
}

/// Coefficient c with kappa_3(P) ~ c / sqrt(P) for large P.
inline double asymptotic_skew_coefficient(const LinearFilter& f) {
    const double r0 = autocovariance(f, 0);
    if (!(r0 > 0.0))
        throw std::invalid_argument("asymptotic_skew_coefficient: zero-variance filter");
    double slope; // sum_{k>=1} a_{k-1} R^a_k
    if (!f.has_second_order()) {
        detail::require_sprz(f, "asymptotic_skew_coefficient");
        cdouble s{};
        for (std::size_t j = 0; j < f.poles.size(); ++j) {
            const cdouble a = system_value(f, 1.0 / f.poles[j]);
            s += f.gain * f.residues[j] * a * a;
        }
        slope = detail::discard_imag(s, "asymptotic_skew_coefficient");
    } else {
        if (f.poles.size() != 1)
            throw std::invalid_argument(
                "asymptotic_skew_coefficient: general multiple-pole filters unsupported");
        const double alpha = f.poles[0].real();
        const double g = f.gain, r = alpha * alpha, d = 1.0 - r;
        const double c0 = (1.0 + r) / (d * d * d);
        const double c1 = 1.0 / (d * d);
        slope = g * g * g / alpha *
                (c0 * r / (d * d) + c1 * r * (1.0 + r) / (d * d * d));
    }
    return 6.0 * slope / std::pow(r0, 1.5);
}

/// Exact EMA1 skewness of the P-period trading return.
inline double ema1_skew_exact(double n_days, long period) {
    if (!(n_days > 1.0)) throw std::invalid_argument("ema1_skew_exact: N must be > 1");
    if (period < 1) throw std::invalid_argument("ema1_skew_exact: P must be >= 1");
    const double a = 1.0 - 1.0 / n_days;
    const double a2 = a * a;
    const double p = double(period);
    return 6.0 * a / (std::sqrt(1.0 - a2) * std::sqrt(p)) *
           (1.0 - (1.0 - std::pow(a, 2.0 * p)) / ((1.0 - a2) * p));
}

/// Large-N scaling limit of the EMA1 skew curve in x = P/N:
/// (3/sqrt(2 x^3)) (e^{-2x} - 1 + 2x). Peaks at about 2.41 near x = 1.07.
inline double ema1_skew_scaling_limit(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("ema1_skew_scaling_limit: x must be > 0");
    return 3.0 / std::sqrt(2.0 * x * x * x) * (std::expm1(-2.0 * x) + 2.0 * x);
}

struct Ema2Moments {
    double mu2;
    double mu3;
    double kappa3;
};

/// Exact EMA2 crossover moments in closed form. The transient terms carry the
/// opposite signs to the published display of this result; the signs here are
/// fixed against the direct summation and the general pole-sum expression
/// (see tests).
inline Ema2Moments ema2_moments_exact(double n_alpha, double n_beta, long period) {
    if (!(n_alpha >= 1.0) || !(n_beta >= 1.0))
        throw std::invalid_argument("ema2_moments_exact: periods must be >= 1");
    if (period < 1) throw std::invalid_argument("ema2_moments_exact: P must be >= 1");
    const double a = 1.0 - 1.0 / n_alpha;
    const double b = 1.0 - 1.0 / n_beta;
    if (std::abs(a - b) < 1e-10) {
        const LinearFilter f = make_ema2(n_alpha, n_beta, false);
        const double mu2 = second_moment(f, period);
        const double mu3 = third_moment_closed(f, period);
        return {mu2, mu3, mu3 / std::pow(mu2, 1.5)};
    }
    const double p = double(period);
    const double ab = a * b;
    const double mu2 = p * (1.0 + ab) / ((1.0 - ab) * (1.0 - a * a) * (1.0 - b * b));
    const double apb = std::pow(ab, p);
    const double mu3 =
        6.0 * p * (a + b) * (1.0 + ab) /
            ((1.0 - ab) * std::pow(1.0 - a * a, 2) * std::pow(1.0 - b * b, 2)) -
        6.0 * a * a * a * (1.0 - std::pow(a, 2.0 * p)) /
            (std::pow(a - b, 2) * std::pow(1.0 - a * a, 3) * (1.0 - ab)) -
        6.0 * b * b * b * (1.0 - std::pow(b, 2.0 * p)) /
            (std::pow(a - b, 2) * std::pow(1.0 - b * b, 3) * (1.0 - ab)) +
        6.0 * a * b * b * (1.0 - apb) /
            (std::pow(a - b, 2) * (1.0 - b * b) * std::pow(1.0 - ab, 3)) +
        6.0 * a * a * b * (1.0 - apb) /
            (std::pow(a - b, 2) * (1.0 - a * a) * std::pow(1.0 - ab, 3));
    return {mu2, mu3, mu3 / std::pow(mu2, 1.5)};
}

/// kappa_3(P) for P = 1..Pmax via the closed-form third moment.
inline MomentTermStructure skew_term_structure(const LinearFilter& f, long pmax) {
    if (pmax < 1) throw std::invalid_argument("skew_term_structure: Pmax must be >= 1");
    MomentTermStructure ts;
    const double r0 = autocovariance(f, 0);
    if (!(r0 > 0.0))
        throw std::invalid_argument("skew_term_structure: zero-variance filter");
    for (long p = 1; p <= pmax; ++p) {
        const double mu2 = double(p) * r0;
        const double mu3 = third_moment_closed(f, p);
        ts.periods.push_back(p);
        ts.mu2.push_back(mu2);
        ts.mu3.push_back(mu3);
        ts.kappa3.push_back(mu3 / std::pow(mu2, 1.5));
    }
    return ts;
}

/// The asymptotic-skewness cubic P(lF, lS) = sum_j rho_j A(1/alpha_j)^2 for
/// the mixture lF * fast + lS * slow. Homogeneous of degree 3 in (lF, lS).
inline double hybrid_cubic(double lambda_fast, double lambda_slow,
                           const LinearFilter& fast, const LinearFilter& slow) {
    const LinearFilter mix = combine({fast, slow}, {lambda_fast, lambda_slow});
    detail::require_sprz(mix, "hybrid_cubic");
    cdouble s{};
    for (std::size_t j = 0; j < mix.poles.size(); ++j) {
        const cdouble a = system_value(mix, 1.0 / mix.poles[j]);
        s += mix.gain * mix.residues[j] * a * a;
    }
    return detail::discard_imag(s, "hybrid_cubic");
}

struct HybridConstraint {
    std::array<double, 4> coefficients{}; // c3 lF^3 + c2 lF^2 lS + c1 lF lS^2 + c0 lS^3
    std::array<std::complex<double>, 3> zetas{};
    int n_real_roots = 0;
    bool unique_real_root = false;
    double zeta1 = 0.0;      // the real root, when unique
    bool degenerate = false; // leading coefficient vanished
};

/// Extracts the cubic by evaluating P at (1,0), (0,1), (1,1), (1,-1) and
/// factorises it. With one real root zeta1 the positivity condition is
/// lambda_F - zeta1 * lambda_S > 0; with three real roots all are reported
/// and no single inequality is emitted.
inline HybridConstraint hybrid_roots(const LinearFilter& fast, const LinearFilter& slow) {
    HybridConstraint out;
    const double c3 = hybrid_cubic(1.0, 0.0, fast, slow);
    const double c0 = hybrid_cubic(0.0, 1.0, fast, slow);
    const double s = hybrid_cubic(1.0, 1.0, fast, slow);
    const double d = hybrid_cubic(1.0, -1.0, fast, slow);
    const double c2 = 0.5 * (s - d) - c0;
    const double c1 = 0.5 * (s + d) - c3;
    out.coefficients = {c3, c2, c1, c0};
    const CubicRoots roots = solve_cubic(c3, c2, c1, c0);
    out.degenerate = roots.degenerate;
    if (out.degenerate) return out;
    out.zetas = roots.roots;
    out.n_real_roots = roots.n_real;
    out.unique_real_root = roots.n_real == 1;
    if (out.unique_real_root) {
        for (const auto& z : roots.roots)
            if (z.imag() == 0.0) out.zeta1 = z.real();
    }
    return out;
}

} // namespace tmom
