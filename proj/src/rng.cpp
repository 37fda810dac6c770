#include "fcomp/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace fcomp::rng {
namespace {

uint64_t poisson_inversion(Stream& stream, double lambda) {
    // sequential search on the CDF; O(lambda)
    const double l = std::exp(-lambda);
    uint64_t k = 0;
    double p = 1.0;
    do {
        p *= 1.0 - stream.next_unit(); // (0, 1]
        if (p <= l) return k;
        ++k;
    } while (k < 1000000);
    return k;
}

// Hormann's PTRD (transformed rejection with decomposition), valid for
// lambda >= 10.
uint64_t poisson_ptrd(Stream& stream, double lambda) {
    const double smu = std::sqrt(lambda);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    for (int iter = 0; iter < 10000; ++iter) {
        double u = stream.next_unit() - 0.5;
        double v = stream.next_unit();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        const double rhs = kf * std::log(lambda) - lambda - std::lgamma(kf + 1.0);
        if (lhs <= rhs) return static_cast<uint64_t>(kf);
    }
    throw std::runtime_error("poisson sampler failed to accept");
}

} // namespace

uint64_t poisson(Stream& stream, double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("poisson mean must be >= 0");
    if (lambda == 0.0) return 0;
    if (lambda < 10.0) return poisson_inversion(stream, lambda);
    return poisson_ptrd(stream, lambda);
}

} // namespace fcomp::rng
