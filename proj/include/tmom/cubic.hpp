#pragma once

/// Real-coefficient cubic root finding (Cardano with trigonometric branch),
/// with a Newton polish on the original polynomial.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace tmom {

struct CubicRoots {
    std::array<std::complex<double>, 3> roots;
    int n_real = 0;     // number of (numerically) real roots
    bool degenerate = false; // leading coefficient ~ 0 relative to the others
};

namespace detail {

inline std::complex<double> polish_root(double c3, double c2, double c1, double c0,
                                        std::complex<double> z) {
    for (int it = 0; it < 3; ++it) {
        std::complex<double> f = ((c3 * z + c2) * z + c1) * z + c0;
        std::complex<double> df = (3.0 * c3 * z + 2.0 * c2) * z + c1;
        if (std::abs(df) == 0.0) break;
        z -= f / df;
    }
    return z;
}

} // namespace detail

/// Roots of c3 x^3 + c2 x^2 + c1 x + c0 = 0. Sets `degenerate` (and throws
/// nothing) when |c3| is negligible against the other coefficients; in that
/// case the roots are not meaningful as a cubic factorisation.
inline CubicRoots solve_cubic(double c3, double c2, double c1, double c0) {
    CubicRoots out;
    const double scale = std::max({std::abs(c2), std::abs(c1), std::abs(c0)});
    if (std::abs(c3) <= 1e-12 * std::max(scale, 1e-300)) {
        out.degenerate = true;
        return out;
    }
    // depressed cubic t^3 + p t + q, x = t - c2/(3 c3)
    const double b = c2 / c3, c = c1 / c3, d = c0 / c3;
    const double shift = b / 3.0;
    const double p = c - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    const double disc = q * q / 4.0 + p * p * p / 27.0;

    std::array<std::complex<double>, 3> t;
    if (disc > 0.0) {
        // one real root, conjugate complex pair
        const double sd = std::sqrt(disc);
        const double u = std::cbrt(-q / 2.0 + sd);
        const double v = std::cbrt(-q / 2.0 - sd);
        const double t0 = u + v;
        t[0] = t0;
        const double re = -t0 / 2.0;
        const double im = std::sqrt(3.0) / 2.0 * std::abs(u - v);
        t[1] = {re, im};
        t[2] = {re, -im};
    } else {
        // three real roots (trigonometric form)
        const double r = std::sqrt(std::max(-p, 0.0) / 3.0);
        double arg = 0.0;
        if (r > 0.0) {
            arg = 3.0 * q / (2.0 * p * r);
            arg = std::clamp(arg, -1.0, 1.0);
        }
        constexpr double two_pi_3 = 2.0943951023931953;
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            t[k] = 2.0 * r * std::cos(phi - two_pi_3 * k);
    }
    int nreal = 0;
    for (int k = 0; k < 3; ++k) {
        std::complex<double> z = detail::polish_root(c3, c2, c1, c0, t[k] - shift);
        if (std::abs(z.imag()) <= 1e-9 * (1.0 + std::abs(z.real()))) {
            z = {z.real(), 0.0};
            ++nreal;
        }
        out.roots[k] = z;
    }
    out.n_real = nreal;
    return out;
}

} // namespace tmom
