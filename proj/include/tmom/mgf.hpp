#pragma once

/// Moment-generating function of the P-period trading return under Gaussian
/// market returns: F_P(s) = det(I - 2 Ghat(s))^{-1/2} with a P-dimensional
/// matrix whose infinite lag sums are evaluated in closed form, plus cumulant
/// extraction by Richardson-extrapolated central differences of log F and the
/// Gram-Charlier exceedance probability.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "tmom/gaussian.hpp"
#include "tmom/linear_filter.hpp"
#include "tmom/linear_moments.hpp"

namespace tmom {

/// Ghat(s)_{jk} = s^2/2 * sum_{l >= -1} a_{j+l} a_{k+l} + s/2 * 1_{j != k} a_{|k-j|-1}
/// with 1-based j,k as in the defining expansion; the lag sum equals
/// R_{|k-j|} minus its first min(j,k)-1 terms, so every entry is exact.
inline Eigen::MatrixXd mgf_matrix(const LinearFilter& f, long period, double s) {
    if (period < 1) throw std::invalid_argument("mgf_matrix: P must be >= 1");
    const std::vector<double> w = weights(f, period + 1);
    Eigen::MatrixXd g(period, period);
    for (long j = 0; j < period; ++j) {
        for (long k = j; k < period; ++k) {
            const long d = k - j;
            double lag = autocovariance(f, d);
            for (long m = 0; m < j; ++m)
                lag -= w[static_cast<std::size_t>(m)] *
                       w[static_cast<std::size_t>(m + d)];
            double entry = 0.5 * s * s * lag;
            if (d != 0) entry += 0.5 * s * w[static_cast<std::size_t>(d - 1)];
            g(j, k) = entry;
            g(k, j) = entry;
        }
    }
    return g;
}

/// log F_P(s); throws std::domain_error outside the convergence strip
/// (defined operationally by failure of the symmetric factorisation).
inline double log_mgf(const LinearFilter& f, long period, double s) {
    const Eigen::MatrixXd m =
        Eigen::MatrixXd::Identity(period, period) - 2.0 * mgf_matrix(f, period, s);
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
        throw std::domain_error("mgf: s outside the convergence strip");
    double log_det = 0.0;
    const auto& l = llt.matrixLLT();
    for (long i = 0; i < period; ++i) log_det += std::log(l(i, i));
    return -log_det; // -1/2 * log det, det = prod diag(L)^2
}

inline double mgf(const LinearFilter& f, long period, double s) {
    return std::exp(log_mgf(f, period, s));
}

struct Cumulants {
    double k1, k2, k3;
};

/// First three cumulants from central differences of log F at scale-aware
/// step h = 1e-3 / sqrt(P R_0), two Richardson levels. A non-contracting
/// Richardson sequence is reported as numerical failure.
inline Cumulants cumulants_from_mgf(const LinearFilter& f, long period) {
    const double r0 = autocovariance(f, 0);
    if (!(r0 > 0.0)) throw std::invalid_argument("cumulants_from_mgf: zero variance");
    const double h = 1e-3 / std::sqrt(double(period) * r0);
    auto lf = [&](double s) { return log_mgf(f, period, s); };

    auto d1 = [&](double step) { return (lf(step) - lf(-step)) / (2.0 * step); };
    auto d2 = [&](double step) { return (lf(step) + lf(-step)) / (step * step); };
    auto d3 = [&](double step) {
        return (lf(2.0 * step) - 2.0 * lf(step) + 2.0 * lf(-step) - lf(-2.0 * step)) /
               (2.0 * step * step * step);
    };
    auto richardson = [](double coarse, double fine) {
        return (4.0 * fine - coarse) / 3.0;
    };
    // levels 2h, h, h/2: the O(step^2) truncation error must contract by
    // about 4x per halving; a growing fine-level difference beyond the
    // roundoff floor of the third difference (log F carries ~1e-15 absolute
    // error, amplified by 1/step^3) means the result is untrustworthy
    const double d3a = d3(2.0 * h), d3b = d3(h), d3c = d3(h / 2);
    const double noise_floor = 1.2e-13 / (h * h * h);
    if (std::abs(d3b - d3c) > 4.0 * std::abs(d3a - d3b) + noise_floor)
        throw std::runtime_error(
            "cumulants_from_mgf: differencing instability (non-contracting "
            "Richardson sequence)");
    Cumulants c{};
    c.k1 = richardson(d1(h), d1(h / 2));
    c.k2 = richardson(d2(h), d2(h / 2));
    c.k3 = richardson(d3b, d3c);
    return c;
}

struct GramCharlierProb {
    double p;
    bool clamped;
};

/// P(Y > 0) ~ Phi(sharpe) - kappa3 / (6 sqrt(2 pi)), clamped to [0, 1].
inline GramCharlierProb gram_charlier_prob(double kappa3, double sharpe) {
    const double raw = normal_cdf(sharpe) - kappa3 / (6.0 * std::sqrt(2.0 * pi));
    GramCharlierProb out{raw, false};
    if (raw < 0.0) { out.p = 0.0; out.clamped = true; }
    if (raw > 1.0) { out.p = 1.0; out.clamped = true; }
    return out;
}

} // namespace tmom
