#ifndef BREGBENCH_MLP_HPP
#define BREGBENCH_MLP_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "bregbench/losses.hpp"
#include "bregbench/types.hpp"

namespace bregbench {

/// Dense multilayer perceptron parameters. Layer l maps sizes[l] inputs to
/// sizes[l+1] outputs; hidden activations are ReLU, the final layer is
/// linear (its softmax lives in the loss).
struct MlpParams {
    std::vector<Eigen::MatrixXd> weights; ///< weights[l] is sizes[l+1] x sizes[l]
    std::vector<Eigen::VectorXd> biases;

    std::size_t input_dim() const { return static_cast<std::size_t>(weights.front().cols()); }
    std::size_t output_dim() const { return static_cast<std::size_t>(weights.back().rows()); }
    std::vector<std::size_t> layer_sizes() const;

    bool operator==(const MlpParams& other) const;
};

/// Same shapes as the reference, all entries zero. Used for gradient and
/// moment accumulators.
MlpParams zeros_like(const MlpParams& reference);

/// Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero,
/// deterministic in the seed.
MlpParams glorot_init(std::span<const std::size_t> layer_sizes, std::uint64_t seed);

struct ForwardResult {
    Logits logits;
    ProbVector probabilities;
};

/// Forward pass for a single feature vector.
ForwardResult forward(const MlpParams& params, std::span<const double> x);

/// Per-example parameter gradients of evaluate_loss(loss, target,
/// softmax(net(x))), via backpropagation seeded by gradient_wrt_logits.
/// The ReLU derivative at exactly 0 is taken as 0.
MlpParams backward(const MlpParams& params, std::span<const double> x, const ProbVector& target,
                   LossId loss, const ClipPolicy& clip = ClipPolicy());

/// Loss value, gradients and prediction from one composed pass; what the
/// training loop consumes.
struct BackpropResult {
    double loss;
    MlpParams gradients;
    ProbVector prediction;
};

BackpropResult backprop(const MlpParams& params, std::span<const double> x,
                        const ProbVector& target, LossId loss,
                        const ClipPolicy& clip = ClipPolicy());

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    MlpParams first_moment;
    MlpParams second_moment;
    std::int64_t timestep = 0;
};

AdamState make_adam_state(const MlpParams& reference);

/// Largest absolute entry-wise difference across all weights and biases.
/// Requires identical shapes.
double max_abs_difference(const MlpParams& a, const MlpParams& b);

/// One bias-corrected Adam update, in place. Deterministic.
void adam_step(MlpParams& params, const MlpParams& gradients, AdamState& state,
               const AdamConfig& cfg);

} // namespace bregbench

#endif // BREGBENCH_MLP_HPP
