#pragma once

/// Causal moving-average filters in pole-residue form.
///
/// A filter is the rational system function
///     A(z) = gain * ( a0 + sum_j rho_j/(z - alpha_j) + sum_j rho2_j/(z - alpha_j)^2 )
/// with all poles strictly inside the unit circle. The impulse response is
///     a_0 = gain * a0,   a_j = gain * sum_p (u_p + v_p j) alpha_p^j   (j >= 1)
/// with u_p = rho_p/alpha_p - rho2_p/alpha_p^2 and v_p = rho2_p/alpha_p^2.
/// Second-order residues arise only for the equal-speed EMA crossover
/// (coalesced poles); everything else is simple-pole.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace tmom {

using cdouble = std::complex<double>;

struct LinearFilter {
    std::vector<cdouble> poles;
    std::vector<cdouble> residues;  // residues of A(z) at the poles
    std::vector<cdouble> residues2; // coefficients of 1/(z-alpha)^2; empty if simple
    double a0 = 0.0;                // limit of A(z)/gain as z -> infinity
    double gain = 1.0;
    bool normalized = false;        // true once R^a_0 == 1

    bool has_second_order() const {
        for (const auto& r : residues2)
            if (std::abs(r) != 0.0) return true;
        return false;
    }
};

/// Diagnostic report for the "simple poles, regular at zero" conditions.
struct SprzReport {
    bool pass = false;
    bool poles_inside_unit_circle = false;
    bool poles_simple = false;
    bool regular_at_origin = false;
    double max_pole_modulus = 0.0;
    double min_pole_modulus = 0.0;
    double min_pole_separation = std::numeric_limits<double>::infinity();
    double origin_value = 0.0; // A(0)
    // Flags filters where the residue at the origin of A(z)A(1/z)/z, namely
    // A(0)*a_0, differs from A(0)^2; the two coincide whenever A(0) = 0.
    bool origin_residue_mismatch = false;
    std::string message;
};

namespace detail {

/// sum_{j>=1} (c + d j + e j^2) x^j for |x| < 1.
inline cdouble geom_poly_sum(cdouble x, cdouble c, cdouble d, cdouble e) {
    const cdouble one{1.0, 0.0};
    const cdouble g1 = x / (one - x);
    const cdouble g2 = x / ((one - x) * (one - x));
    const cdouble g3 = x * (one + x) / ((one - x) * (one - x) * (one - x));
    return c * g1 + d * g2 + e * g3;
}

/// Per-pole coefficients (u_p, v_p) of the impulse response for j >= 1.
struct ExpPoly {
    std::vector<cdouble> alpha, u, v;
};

inline ExpPoly exp_poly(const LinearFilter& f) {
    ExpPoly ep;
    const std::size_t m = f.poles.size();
    ep.alpha.resize(m);
    ep.u.resize(m);
    ep.v.resize(m);
    for (std::size_t p = 0; p < m; ++p) {
        const cdouble a = f.poles[p];
        const cdouble r = f.residues[p];
        const cdouble r2 = p < f.residues2.size() ? f.residues2[p] : cdouble{};
        ep.alpha[p] = a;
        ep.u[p] = r / a - r2 / (a * a);
        ep.v[p] = r2 / (a * a);
    }
    return ep;
}

inline double discard_imag(cdouble z, const char* what) {
    if (std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(z.real())))
        throw std::runtime_error(std::string(what) +
                                 ": non-negligible imaginary part; conjugate pole/residue "
                                 "pairing is broken");
    return z.real();
}

} // namespace detail

/// Impulse-response weight a_j (gain included).
inline double weight(const LinearFilter& f, long j) {
    if (j < 0) throw std::invalid_argument("weight: j must be >= 0");
    if (j == 0) return f.gain * f.a0;
    cdouble s{};
    for (std::size_t p = 0; p < f.poles.size(); ++p) {
        const cdouble a = f.poles[p];
        cdouble term = f.residues[p] * std::pow(a, double(j - 1));
        if (p < f.residues2.size() && std::abs(f.residues2[p]) != 0.0 && j >= 2)
            term += f.residues2[p] * double(j - 1) * std::pow(a, double(j - 2));
        s += term;
    }
    return f.gain * detail::discard_imag(s, "weight");
}

/// First `count` weights a_0 .. a_{count-1}.
inline std::vector<double> weights(const LinearFilter& f, long count) {
    std::vector<double> w(static_cast<std::size_t>(count));
    // Evaluate by per-pole recursion rather than pow() per element.
    for (auto& x : w) x = 0.0;
    if (count <= 0) return w;
    w[0] = f.gain * f.a0;
    detail::ExpPoly ep = detail::exp_poly(f);
    for (std::size_t p = 0; p < ep.alpha.size(); ++p) {
        cdouble apow{1.0, 0.0};
        for (long j = 1; j < count; ++j) {
            apow *= ep.alpha[p]; // alpha^j
            w[static_cast<std::size_t>(j)] +=
                f.gain * ((ep.u[p] + ep.v[p] * double(j)) * apow).real();
        }
    }
    return w;
}

/// Autocovariance R^a_k = sum_{j>=0} a_j a_{j+k}, in closed form.
inline double autocovariance(const LinearFilter& f, long k) {
    if (k < 0) throw std::invalid_argument("autocovariance: k must be >= 0");
    detail::ExpPoly ep = detail::exp_poly(f);
    const std::size_t m = ep.alpha.size();
    // a_0 * a_k
    cdouble s{};
    if (k == 0) {
        s += cdouble(f.a0 * f.a0, 0.0);
    } else {
        cdouble ak{};
        for (std::size_t q = 0; q < m; ++q)
            ak += (ep.u[q] + ep.v[q] * double(k)) * std::pow(ep.alpha[q], double(k));
        s += f.a0 * ak;
    }
    // sum_{j>=1} a_j a_{j+k}
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = 0; q < m; ++q) {
            const cdouble x = ep.alpha[p] * ep.alpha[q];
            const cdouble uq = ep.u[q] + ep.v[q] * double(k);
            const cdouble c = ep.u[p] * uq;
            const cdouble d = ep.u[p] * ep.v[q] + ep.v[p] * uq;
            const cdouble e = ep.v[p] * ep.v[q];
            s += std::pow(ep.alpha[q], double(k)) * detail::geom_poly_sum(x, c, d, e);
        }
    }
    return f.gain * f.gain * detail::discard_imag(s, "autocovariance");
}

/// System function A(z) via its rational continuation (gain included).
inline cdouble system_value(const LinearFilter& f, cdouble z) {
    cdouble s{f.a0, 0.0};
    for (std::size_t p = 0; p < f.poles.size(); ++p) {
        const cdouble dz = z - f.poles[p];
        if (std::abs(dz) < 1e-14)
            throw std::domain_error("system_value: z coincides with a pole");
        s += f.residues[p] / dz;
        if (p < f.residues2.size() && std::abs(f.residues2[p]) != 0.0)
            s += f.residues2[p] / (dz * dz);
    }
    return f.gain * s;
}

inline SprzReport sprz_check(const LinearFilter& f) {
    SprzReport rep;
    rep.poles_inside_unit_circle = true;
    rep.regular_at_origin = true;
    rep.poles_simple = !f.has_second_order();
    rep.min_pole_modulus = f.poles.empty() ? 0.0 : std::numeric_limits<double>::infinity();
    std::ostringstream msg;
    for (const auto& a : f.poles) {
        const double mod = std::abs(a);
        rep.max_pole_modulus = std::max(rep.max_pole_modulus, mod);
        rep.min_pole_modulus = std::min(rep.min_pole_modulus, mod);
        if (mod >= 1.0) rep.poles_inside_unit_circle = false;
        if (mod == 0.0) rep.regular_at_origin = false;
    }
    for (std::size_t i = 0; i < f.poles.size(); ++i)
        for (std::size_t j = i + 1; j < f.poles.size(); ++j)
            rep.min_pole_separation =
                std::min(rep.min_pole_separation, std::abs(f.poles[i] - f.poles[j]));
    if (rep.min_pole_separation < 1e-10) rep.poles_simple = false;
    if (rep.regular_at_origin && rep.poles_inside_unit_circle) {
        cdouble a0v{f.a0, 0.0};
        for (std::size_t p = 0; p < f.poles.size(); ++p) {
            a0v -= f.residues[p] / f.poles[p];
            if (p < f.residues2.size())
                a0v += f.residues2[p] / (f.poles[p] * f.poles[p]);
        }
        rep.origin_value = f.gain * a0v.real();
        const double lead = f.gain * f.a0;
        rep.origin_residue_mismatch =
            std::abs(rep.origin_value * lead - rep.origin_value * rep.origin_value) >
            1e-12 * (1.0 + rep.origin_value * rep.origin_value);
    }
    rep.pass = rep.poles_inside_unit_circle && rep.poles_simple && rep.regular_at_origin;
    if (!rep.poles_inside_unit_circle) msg << "pole modulus >= 1; ";
    if (!rep.poles_simple) msg << "poles not simple (multiplicity or separation < 1e-10); ";
    if (!rep.regular_at_origin) msg << "pole at the origin; ";
    if (rep.origin_residue_mismatch) msg << "A(0)*a_0 != A(0)^2 (origin residue differs); ";
    rep.message = msg.str();
    return rep;
}

/// Largest effective EMA period 1/(1 - max|alpha|); 1 for a pole-free filter.
inline double slowest_period(const LinearFilter& f) {
    double m = 0.0;
    for (const auto& a : f.poles) m = std::max(m, std::abs(a));
    return m >= 1.0 ? std::numeric_limits<double>::infinity() : 1.0 / (1.0 - m);
}

/// Copy of f scaled by c (weights scale by c; kappa_3 is unaffected).
inline LinearFilter scaled(const LinearFilter& f, double c) {
    LinearFilter g = f;
    g.gain *= c;
    g.normalized = false;
    return g;
}

/// Copy of f rescaled so that R^a_0 = 1.
inline LinearFilter normalize(const LinearFilter& f) {
    const double r0 = autocovariance(f, 0);
    if (!(r0 > 0.0))
        throw std::invalid_argument("normalize: filter has zero variance (R_0 = 0)");
    LinearFilter g = f;
    g.gain /= std::sqrt(r0);
    g.normalized = true;
    return g;
}

/// Single EMA of returns: weights a_j = alpha^{j+1}, alpha = 1 - 1/N.
/// N = 1 degenerates to the zero filter.
inline LinearFilter make_ema1(double n_days, bool normalized = false) {
    if (!(n_days >= 1.0)) throw std::invalid_argument("make_ema1: N must be >= 1");
    const double alpha = 1.0 - 1.0 / n_days;
    LinearFilter f;
    f.a0 = alpha;
    if (alpha > 0.0) {
        f.poles = {cdouble(alpha, 0.0)};
        f.residues = {cdouble(alpha * alpha, 0.0)};
    }
    return normalized ? normalize(f) : f;
}

/// EMA crossover of returns: weights a_j = (alpha^{j+1} - beta^{j+1})/(alpha - beta).
/// Equal (or nearly equal, within 1e-10) speeds coalesce to the double-EMA
/// limit a_j = (j+1) alpha^j, carried as a second-order pole term.
inline LinearFilter make_ema2(double n_alpha, double n_beta, bool normalized = false) {
    if (!(n_alpha >= 1.0) || !(n_beta >= 1.0))
        throw std::invalid_argument("make_ema2: periods must be >= 1");
    const double alpha = 1.0 - 1.0 / n_alpha;
    const double beta = 1.0 - 1.0 / n_beta;
    LinearFilter f;
    f.a0 = 1.0;
    if (std::abs(alpha - beta) < 1e-10) {
        if (alpha > 0.0) {
            f.poles = {cdouble(alpha, 0.0)};
            f.residues = {cdouble(2.0 * alpha, 0.0)};
            f.residues2 = {cdouble(alpha * alpha, 0.0)};
        }
        // alpha = beta = 0: pure pass-through, a_0 = 1 only.
    } else if (alpha == 0.0 || beta == 0.0) {
        const double b = std::max(alpha, beta);
        f.poles = {cdouble(b, 0.0)};
        f.residues = {cdouble(b, 0.0)};
    } else {
        f.poles = {cdouble(alpha, 0.0), cdouble(beta, 0.0)};
        f.residues = {cdouble(alpha * alpha / (alpha - beta), 0.0),
                      cdouble(-beta * beta / (alpha - beta), 0.0)};
    }
    return normalized ? normalize(f) : f;
}

inline LinearFilter combine(const std::vector<LinearFilter>& filters,
                            const std::vector<double>& coeffs);

/// Price-EMA crossover (fast EMA of prices minus slow EMA of prices), which
/// in return space is EMA1(n_slow) - EMA1(n_fast): weights
/// beta^{j+1} - alpha^{j+1} > 0 for n_fast < n_slow. This is the component
/// normalisation used by the hybrid fast/slow constraint analysis.
inline LinearFilter make_ema_crossover(double n_fast, double n_slow,
                                       bool normalized = false) {
    if (!(n_slow > n_fast))
        throw std::invalid_argument("make_ema_crossover: need n_fast < n_slow");
    LinearFilter f =
        combine({make_ema1(n_slow, false), make_ema1(n_fast, false)}, {1.0, -1.0});
    return normalized ? normalize(f) : f;
}

/// Linear combination of filters in pole-residue form. Identical poles
/// (within 1e-14) merge by summing residues; distinct poles closer than
/// 1e-10 are rejected to avoid catastrophic cancellation downstream.
inline LinearFilter combine(const std::vector<LinearFilter>& filters,
                            const std::vector<double>& coeffs) {
    if (filters.size() != coeffs.size())
        throw std::invalid_argument("combine: filters/weights size mismatch");
    LinearFilter out;
    out.a0 = 0.0;
    for (std::size_t i = 0; i < filters.size(); ++i) {
        const LinearFilter& f = filters[i];
        const double w = coeffs[i] * f.gain;
        out.a0 += w * f.a0;
        for (std::size_t p = 0; p < f.poles.size(); ++p) {
            const cdouble pole = f.poles[p];
            const cdouble r = w * f.residues[p];
            const cdouble r2 =
                p < f.residues2.size() ? w * f.residues2[p] : cdouble{};
            bool merged = false;
            for (std::size_t q = 0; q < out.poles.size(); ++q) {
                const double sep = std::abs(out.poles[q] - pole);
                if (sep <= 1e-14) {
                    out.residues[q] += r;
                    out.residues2[q] += r2;
                    merged = true;
                    break;
                }
                if (sep < 1e-10)
                    throw std::invalid_argument(
                        "combine: near-coincident distinct poles (separation < 1e-10); "
                        "coalesce explicitly");
            }
            if (!merged) {
                out.poles.push_back(pole);
                out.residues.push_back(r);
                out.residues2.push_back(r2);
            }
        }
    }
    // canonical pole order, and drop vanished residues
    std::vector<std::size_t> idx(out.poles.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (out.poles[a].real() != out.poles[b].real())
            return out.poles[a].real() < out.poles[b].real();
        return out.poles[a].imag() < out.poles[b].imag();
    });
    LinearFilter sorted;
    sorted.a0 = out.a0;
    for (std::size_t i : idx) {
        if (std::abs(out.residues[i]) == 0.0 && std::abs(out.residues2[i]) == 0.0)
            continue;
        sorted.poles.push_back(out.poles[i]);
        sorted.residues.push_back(out.residues[i]);
        sorted.residues2.push_back(out.residues2[i]);
    }
    bool any2 = false;
    for (const auto& r : sorted.residues2)
        if (std::abs(r) != 0.0) any2 = true;
    if (!any2) sorted.residues2.clear();
    return sorted;
}

} // namespace tmom
