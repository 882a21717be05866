#include "vacancy/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace vacancy {

std::int64_t RngStream::poisson(double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::invalid_argument("poisson: mean must be finite and >= 0");
    std::int64_t total = 0;
    double remaining = mean;
    while (remaining > 0.0) {
        const double chunk = remaining > 32.0 ? 32.0 : remaining;
        remaining -= chunk;
        const double threshold = std::exp(-chunk);
        double product = 1.0;
        std::int64_t count = -1;
        do {
            ++count;
            product *= uniform01();
        } while (product > threshold);
        total += count;
    }
    return total;
}

} // namespace vacancy
