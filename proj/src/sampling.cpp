#include "bregbench/sampling.hpp"

#include <cmath>
#include <vector>

#include "bregbench/errors.hpp"

namespace bregbench {

ProbVector random_simplex(Rng& rng, std::size_t k, double floor) {
    if (k < 2) {
        throw InvalidInputError("random_simplex: need at least 2 categories");
    }
    if (!(floor >= 0.0 && floor < 1.0 / static_cast<double>(k))) {
        throw InvalidInputError("random_simplex: floor must lie in [0, 1/k)");
    }
    std::vector<double> values(k);
    while (true) {
        double sum = 0.0;
        for (double& v : values) {
            v = -std::log(1.0 - rng.uniform()); // Exp(1), strictly positive
            sum += v;
        }
        bool ok = true;
        for (double& v : values) {
            v /= sum;
            if (v < floor) {
                ok = false;
            }
        }
        if (ok) {
            return ProbVector(values);
        }
    }
}

} // namespace bregbench
