#pragma once

/// Quadratic-form view of the P-period trading return: the truncated
/// symmetric matrix whose quadratic form in the market-return vector equals
/// the trading return, its trace identities for the moments, and its
/// eigenvalue structure (the "orthogonal quadratic bets").

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "tmom/linear_filter.hpp"

namespace tmom {

struct GammaOperator {
    long period = 0;     // P
    long history = 0;    // truncation lag L; matrix dimension is P + L
    double tol = 0.0;    // tail tolerance used to choose L
    Eigen::MatrixXd matrix;
    LinearFilter filter;
};

/// Builds the truncated quadratic form. The infinite operator is cut at
/// history lag L, the smallest lag whose remaining weight tail is below
/// `tol` relative to the largest weight.
inline GammaOperator gamma_matrix(const LinearFilter& f, long period,
                                  double tol = 1e-12) {
    if (period < 1) throw std::invalid_argument("gamma_matrix: P must be >= 1");
    double rmax = 0.0;
    for (const auto& p : f.poles) rmax = std::max(rmax, std::abs(p));
    long history = 8;
    if (rmax > 0.0) {
        history = static_cast<long>(std::ceil(std::log(tol) / std::log(rmax))) + 2;
        // polynomial factor from a coalesced pole decays slower; extend until
        // the actual weight tail is under tolerance
        double wscale = 0.0;
        for (long j = 0; j < std::min<long>(history, 64); ++j)
            wscale = std::max(wscale, std::abs(weight(f, j)));
        while (history < 2000000 &&
               std::abs(weight(f, period + history)) > tol * wscale * (1.0 - rmax))
            history += history / 4 + 1;
    }
    GammaOperator g;
    g.period = period;
    g.history = history;
    g.tol = tol;
    g.filter = f;
    const long n = period + history;
    const std::vector<double> w = weights(f, n);
    g.matrix = Eigen::MatrixXd::Zero(n, n);
    for (long r = 0; r < period; ++r)
        for (long c = r + 1; c < n; ++c) {
            const double half = 0.5 * w[static_cast<std::size_t>(c - r - 1)];
            g.matrix(r, c) += half;
            g.matrix(c, r) += half;
        }
    return g;
}

/// Quadratic form u' Gamma u for a truncated return history
/// u = [U_{n+P}, U_{n+P-1}, ...]; test hook for the strategy equivalence.
inline double quadratic_form(const GammaOperator& g, const Eigen::VectorXd& u) {
    if (u.size() != g.matrix.rows())
        throw std::invalid_argument("quadratic_form: dimension mismatch");
    return u.dot(g.matrix * u);
}

struct TraceMoments {
    double m1; // <Y> = tr Gamma (exactly zero: the diagonal is empty)
    double m2; // <Y^2> = 2 tr Gamma^2
    double m3; // <Y^3> = 8 tr Gamma^3
};

inline TraceMoments trace_moments(const GammaOperator& g) {
    TraceMoments t{};
    t.m1 = g.matrix.trace();
    t.m2 = 2.0 * g.matrix.squaredNorm(); // tr G^2 for symmetric G
    const Eigen::MatrixXd g2 = g.matrix * g.matrix;
    t.m3 = 8.0 * g2.cwiseProduct(g.matrix).sum();
    return t;
}

struct EigenSummary {
    Eigen::VectorXd eigenvalues; // descending
    long n_positive = 0;
    long n_negative = 0;
    long rank = 0;
    double threshold = 0.0; // rank cut: 1e-10 * max |eigenvalue|
};

inline EigenSummary eigen_summary(const GammaOperator& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.matrix,
                                                          Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("eigen_summary: eigensolver failed to converge");
    EigenSummary s;
    s.eigenvalues = solver.eigenvalues().reverse();
    const double gmax = std::max(std::abs(s.eigenvalues(0)),
                                 std::abs(s.eigenvalues(s.eigenvalues.size() - 1)));
    s.threshold = 1e-10 * gmax;
    for (long i = 0; i < s.eigenvalues.size(); ++i) {
        const double v = s.eigenvalues(i);
        if (std::abs(v) > s.threshold) {
            ++s.rank;
            if (v > 0) ++s.n_positive;
            else ++s.n_negative;
        }
    }
    return s;
}

} // namespace tmom
