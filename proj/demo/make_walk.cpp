// Emits a synthetic constant-volatility gaussian price walk as CSV on stdout,
// for feeding the backtest command: ./make_walk [days] [sigma] [seed] > px.csv

#include <cstdio>
#include <cstdlib>

#include "tmom/price_series.hpp"
#include "tmom/rng.hpp"

int main(int argc, char** argv) {
    const long days = argc > 1 ? std::atol(argv[1]) : 20000;
    const double sigma = argc > 2 ? std::atof(argv[2]) : 1.5;
    const std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 1;
    std::mt19937_64 rng = tmom::make_path_rng(seed, 0);
    tmom::NormalSampler normal;
    std::printf("date,price\n");
    double x = 1000.0;
    for (long i = 0; i < days; ++i) {
        std::printf("%04ld-%02ld-%02ld,%.10g\n", 2000 + i / 336, 1 + (i / 28) % 12,
                    1 + i % 28, x);
        x += sigma * normal(rng);
    }
    return 0;
}
