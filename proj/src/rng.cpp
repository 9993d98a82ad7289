#include "trackgen/rng.hpp"

#include <cmath>

namespace trackgen {

std::size_t Rng::weighted_index(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw UserError("negative probability weight");
        total += w;
    }
    if (total <= 0.0) throw UserError("probability weights sum to zero");
    const double u = next_double() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (u < acc) return i;
    }
    return weights.size() - 1;  // u landed on the top edge
}

int sample_poisson(double lambda, Rng& rng) {
    if (lambda < 0.0) throw UserError("Poisson lambda must be nonnegative");
    const double limit = std::exp(-lambda);
    double prod = 1.0;
    int k = 0;
    do {
        prod *= rng.next_double();
        ++k;
    } while (prod > limit);
    return k - 1;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed ^ (salt * 0x9E3779B97F4A7C15ULL);
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace trackgen
