#ifndef BREGBENCH_BREGMAN_HPP
#define BREGBENCH_BREGMAN_HPP

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bregbench/losses.hpp"
#include "bregbench/types.hpp"

namespace bregbench {

/// A strictly convex differentiable generator: value and gradient evaluated
/// at interior points of the positive orthant. The shipped generators guard
/// their own log/ratio operands, so boundary arguments stay finite.
struct ConvexGenerator {
    std::function<double(std::span<const double>)> value;
    std::function<std::vector<double>(std::span<const double>)> gradient;
    std::string name;
};

/// Generic Bregman divergence
///   d(x, y) = phi(x) - phi(y) - <x - y, grad phi(y)>
/// with y clamped into [clip.epsilon(), 1] before the gradient evaluation.
/// d(x, x) == 0 exactly; throws NumericDomainError if the generator produces
/// a non-finite value at the (clipped) evaluation points.
double bregman_from_phi(const ConvexGenerator& phi, const ProbVector& x, const ProbVector& y,
                        const ClipPolicy& clip = ClipPolicy());

/// phi(x) = sum x_j^2, inducing the squared Euclidean distance.
ConvexGenerator make_squared_norm_generator();

/// phi(x) = sum x_j log x_j (negative entropy), inducing forward KL on the
/// simplex.
ConvexGenerator make_negative_entropy_generator(const ClipPolicy& clip = ClipPolicy());

/// phi(x) = -sum log x_j, inducing the Itakura-Saito distance.
ConvexGenerator make_negative_log_generator(const ClipPolicy& clip = ClipPolicy());

/// phi(x) = sum (x_j log x_j - x_j), inducing the generalized I-divergence on
/// the positive reals.
ConvexGenerator make_generalized_i_generator(const ClipPolicy& clip = ClipPolicy());

/// The generator whose induced divergence matches the registry entry for a
/// Bregman loss id. Throws InvalidInputError for non-Bregman ids.
ConvexGenerator generator_for(LossId id, const ClipPolicy& clip = ClipPolicy());

} // namespace bregbench

#endif // BREGBENCH_BREGMAN_HPP
