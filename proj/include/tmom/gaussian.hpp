#pragma once

/// Standard normal density/cdf helpers and a small formulary of closed-form
/// Gaussian expectations used by the nonlinear activation calculations.

#include <cmath>
#include <stdexcept>

namespace tmom {

inline constexpr double pi = 3.14159265358979323846;

/// Standard normal density.
inline double normal_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

/// Standard normal cdf, accurate in both tails.
inline double normal_cdf(double x) {
    static const double inv_sqrt2 = 0.7071067811865475244;
    return 0.5 * std::erfc(-x * inv_sqrt2);
}

/// Closed-form expectations over Z ~ N(0,1), plus the bivariate reweighting
/// map for N2(rho) with exponential-quadratic tilts. Each field is the exact
/// value of the corresponding expectation.
struct GaussianIdentitySuite {
    double even_moment_damped; ///< <Z^{2n} exp(-b^2 Z^2/2)>
    double pdf_shift;          ///< <phi(a + bZ)>
    double cdf_shift;          ///< <Phi(a + bZ)>
    double z_pdf_shift;        ///< <Z phi(a + bZ)>
    double z_cdf_shift;        ///< <Z Phi(a + bZ)>
    double cdf_product;        ///< <Phi(aZ) Phi(bZ)>
    // Reweighting of N2(rho) by exp(-a^2 Z1^2/2) exp(-b^2 Z2^2/2):
    // the tilted pair is N2(rho_hat) after rescaling by sqrt(D2/D), sqrt(D1/D),
    // with overall factor 1/sqrt(D).
    double d1;
    double d2;
    double d;
    double rho_hat;
};

inline double double_factorial_odd(int n) {
    // (2n-1)!! with the empty-product convention (2*0-1)!! = 1
    double r = 1.0;
    for (int k = 2 * n - 1; k > 1; k -= 2) r *= k;
    return r;
}

inline GaussianIdentitySuite evaluate_gaussian_identities(double a, double b,
                                                          double rho, int n) {
    if (n < 0) throw std::invalid_argument("gaussian identities: n must be >= 0");
    GaussianIdentitySuite out{};
    const double b2 = b * b;
    out.even_moment_damped =
        double_factorial_odd(n) * std::pow(1.0 + b2, -(2.0 * n + 1.0) / 2.0);
    const double s = std::sqrt(1.0 + b2);
    out.pdf_shift = normal_pdf(a / s) / s;
    out.cdf_shift = normal_cdf(a / s);
    out.z_pdf_shift = -a * b / ((1.0 + b2) * s) * normal_pdf(a / s);
    out.z_cdf_shift = b / s * normal_pdf(a / s);
    out.cdf_product =
        std::atan(a * b / std::sqrt(1.0 + a * a + b * b)) / (2.0 * pi) + 0.25;
    const double r2 = 1.0 - rho * rho;
    out.d1 = r2 * a * a + 1.0;
    out.d2 = r2 * b * b + 1.0;
    out.d = r2 * a * a * b * b + a * a + b * b + 1.0;
    out.rho_hat = rho / std::sqrt(out.d1 * out.d2);
    return out;
}

} // namespace tmom
