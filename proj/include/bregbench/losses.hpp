#ifndef BREGBENCH_LOSSES_HPP
#define BREGBENCH_LOSSES_HPP

#include <array>
#include <span>
#include <string>
#include <vector>

#include "bregbench/types.hpp"

namespace bregbench {

/// The nine objective functions. Values and gradients treat the first
/// argument as the target distribution p and the second as the prediction q.
enum class LossId {
    Mse,
    Rmse,
    CrossEntropy,
    ReverseKl,
    JensenShannon,
    ForwardKl,
    ItakuraSaito,
    GeneralizedI,
    SquaredEuclidean,
};

/// True exactly for the four losses derived from a convex generator:
/// squared Euclidean, forward KL, generalized I and Itakura-Saito.
bool is_bregman(LossId id);

/// Lowercase snake_case identifier, e.g. "cross_entropy". Stable; used in
/// config files and reports.
std::string loss_name(LossId id);

/// Inverse of loss_name. Throws InvalidInputError on unknown names.
LossId loss_from_name(const std::string& name);

/// All nine ids in canonical (report) order.
std::span<const LossId> all_losses();

/// Numerically safe softmax (max subtraction). Invariant under adding a
/// constant to every logit.
ProbVector softmax(const Logits& z);

/// Per-example objective value, >= 0 for every id. Log and ratio operands are
/// clamped into [clip.epsilon(), 1]; difference terms are left exact.
double evaluate_loss(LossId id, const ProbVector& target, const ProbVector& prediction,
                     const ClipPolicy& clip = ClipPolicy());

/// Closed-form partial derivatives of the objective with respect to each
/// prediction coordinate. Clamping acts as a stop-gradient: a clipped operand
/// contributes zero derivative.
///
/// The forward-KL gradient carries the +1 mass term of its positive-orthant
/// (generalized-I) form, so the matched point target == prediction is
/// stationary; the raw coordinate partial differs only by a constant vector,
/// which the softmax chain rule annihilates.
///
/// Throws SingularGradientError for RMSE when the mean squared error is under
/// the 1e-12 floor.
std::vector<double> gradient_wrt_prediction(LossId id, const ProbVector& target,
                                            const ProbVector& prediction,
                                            const ClipPolicy& clip = ClipPolicy());

/// Gradient of evaluate_loss(id, target, softmax(z)) with respect to the
/// logits z: the softmax Jacobian applied to gradient_wrt_prediction. For
/// cross-entropy this reduces to softmax(z) - target in exact arithmetic.
std::vector<double> gradient_wrt_logits(LossId id, const ProbVector& target, const Logits& z,
                                        const ClipPolicy& clip = ClipPolicy());

/// Arithmetic mean of per-example values. Throws InvalidInputError on an
/// empty batch, ShapeError if the sequences disagree in length.
double batch_loss(LossId id, std::span<const ProbVector> targets,
                  std::span<const ProbVector> predictions,
                  const ClipPolicy& clip = ClipPolicy());

/// Shannon entropy -sum p log p with clipped logs, in nats. Satisfies
/// cross_entropy(p, q) == entropy(p) + forward_kl(p, q).
double entropy(const ProbVector& p, const ClipPolicy& clip = ClipPolicy());

/// MSE under the root must stay above this floor for the RMSE derivative to
/// be considered finite.
inline constexpr double kRmseGradientFloor = 1e-12;

} // namespace bregbench

#endif // BREGBENCH_LOSSES_HPP
