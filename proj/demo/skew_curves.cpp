// Prints the skewness term structure of a 20/40 crossover under several
// position functions, side by side — the characteristic rise, peak and
// P^{-1/2} roll-off, compressed (or inverted) by the nonlinearities.

#include <cstdio>

#include "tmom/linear_moments.hpp"
#include "tmom/nonlinear_moments.hpp"

int main() {
    using namespace tmom;
    const LinearFilter f = make_ema2(20.0, 40.0, true);
    const long pmax = 300;
    const auto linear = skew_term_structure(f, pmax);
    const auto sigmoid =
        nonlinear_term_structure(f, activation_simple_sigmoid(1.0), pmax).ts;
    const auto reverting =
        nonlinear_term_structure(f, activation_reverting_sigmoid(1.5), pmax).ts;
    const auto dstep =
        nonlinear_term_structure(f, activation_double_step(0.6), pmax).ts;

    std::printf("%6s %10s %12s %14s %14s\n", "P", "linear", "sigmoid(1)",
                "reverting(1.5)", "double_step(.6)");
    for (long p = 10; p <= pmax; p += 10) {
        const std::size_t i = std::size_t(p - 1);
        std::printf("%6ld %10.4f %12.4f %14.4f %14.4f\n", p, linear.kappa3[i],
                    sigmoid.kappa3[i], reverting.kappa3[i], dstep.kappa3[i]);
    }
    return 0;
}
