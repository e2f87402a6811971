#ifndef BREGBENCH_SAMPLING_HPP
#define BREGBENCH_SAMPLING_HPP

#include <cstddef>

#include "bregbench/rng.hpp"
#include "bregbench/types.hpp"

namespace bregbench {

/// Uniform draw from the probability simplex (normalized exponentials),
/// resampled until every coordinate is at least `floor`. The floor keeps
/// points away from the clipping region so divergence identities hold at
/// full precision.
ProbVector random_simplex(Rng& rng, std::size_t k, double floor = 1e-6);

} // namespace bregbench

#endif // BREGBENCH_SAMPLING_HPP
