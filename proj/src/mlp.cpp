#include "bregbench/mlp.hpp"

#include <cmath>
#include <cstddef>
#include <string>

#include "bregbench/errors.hpp"
#include "bregbench/rng.hpp"

namespace bregbench {

namespace {

void require_same_shape(const MlpParams& a, const MlpParams& b, const char* where) {
    bool ok = a.weights.size() == b.weights.size() && a.biases.size() == b.biases.size();
    for (std::size_t l = 0; ok && l < a.weights.size(); ++l) {
        ok = a.weights[l].rows() == b.weights[l].rows() &&
             a.weights[l].cols() == b.weights[l].cols() &&
             a.biases[l].size() == b.biases[l].size();
    }
    if (!ok) {
        throw ShapeError(std::string(where) + ": parameter shapes do not match");
    }
}

} // namespace

std::vector<std::size_t> MlpParams::layer_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.reserve(weights.size() + 1);
    sizes.push_back(static_cast<std::size_t>(weights.front().cols()));
    for (const auto& w : weights) {
        sizes.push_back(static_cast<std::size_t>(w.rows()));
    }
    return sizes;
}

bool MlpParams::operator==(const MlpParams& other) const {
    if (weights.size() != other.weights.size()) {
        return false;
    }
    for (std::size_t l = 0; l < weights.size(); ++l) {
        if (weights[l].rows() != other.weights[l].rows() ||
            weights[l].cols() != other.weights[l].cols() ||
            biases[l].size() != other.biases[l].size()) {
            return false;
        }
        if (!(weights[l].array() == other.weights[l].array()).all() ||
            !(biases[l].array() == other.biases[l].array()).all()) {
            return false;
        }
    }
    return true;
}

MlpParams zeros_like(const MlpParams& reference) {
    MlpParams out;
    out.weights.reserve(reference.weights.size());
    out.biases.reserve(reference.biases.size());
    for (std::size_t l = 0; l < reference.weights.size(); ++l) {
        out.weights.push_back(
            Eigen::MatrixXd::Zero(reference.weights[l].rows(), reference.weights[l].cols()));
        out.biases.push_back(Eigen::VectorXd::Zero(reference.biases[l].size()));
    }
    return out;
}

MlpParams glorot_init(std::span<const std::size_t> layer_sizes, std::uint64_t seed) {
    if (layer_sizes.size() < 2) {
        throw InvalidInputError("glorot_init: need at least an input and an output layer");
    }
    for (std::size_t s : layer_sizes) {
        if (s == 0) {
            throw InvalidInputError("glorot_init: zero-width layer");
        }
    }
    Rng rng(seed);
    MlpParams params;
    for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
        const auto fan_in = static_cast<Eigen::Index>(layer_sizes[l]);
        const auto fan_out = static_cast<Eigen::Index>(layer_sizes[l + 1]);
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
        Eigen::MatrixXd w(fan_out, fan_in);
        // Row-major draw order so the weight stream is independent of
        // Eigen's storage layout.
        for (Eigen::Index r = 0; r < fan_out; ++r) {
            for (Eigen::Index c = 0; c < fan_in; ++c) {
                w(r, c) = rng.uniform(-bound, bound);
            }
        }
        params.weights.push_back(std::move(w));
        params.biases.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    return params;
}

ForwardResult forward(const MlpParams& params, std::span<const double> x) {
    if (x.size() != params.input_dim()) {
        throw ShapeError("forward: feature vector has size " + std::to_string(x.size()) +
                         ", network expects " + std::to_string(params.input_dim()));
    }
    Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    const std::size_t layers = params.weights.size();
    for (std::size_t l = 0; l + 1 < layers; ++l) {
        a = ((params.weights[l] * a + params.biases[l]).array().max(0.0)).matrix();
    }
    const Eigen::VectorXd z = params.weights[layers - 1] * a + params.biases[layers - 1];
    Logits logits(std::vector<double>(z.data(), z.data() + z.size()));
    ProbVector probabilities = softmax(logits);
    return ForwardResult{std::move(logits), std::move(probabilities)};
}

BackpropResult backprop(const MlpParams& params, std::span<const double> x,
                        const ProbVector& target, LossId loss, const ClipPolicy& clip) {
    if (x.size() != params.input_dim()) {
        throw ShapeError("backprop: feature vector has size " + std::to_string(x.size()) +
                         ", network expects " + std::to_string(params.input_dim()));
    }
    if (target.size() != params.output_dim()) {
        throw ShapeError("backprop: target has " + std::to_string(target.size()) +
                         " categories, network emits " + std::to_string(params.output_dim()));
    }

    const std::size_t layers = params.weights.size();
    std::vector<Eigen::VectorXd> activations; // activations[l] feeds weights[l]
    std::vector<Eigen::VectorXd> pre_activations;
    activations.reserve(layers);
    pre_activations.reserve(layers);

    activations.emplace_back(
        Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size())));
    for (std::size_t l = 0; l < layers; ++l) {
        pre_activations.push_back(params.weights[l] * activations[l] + params.biases[l]);
        if (l + 1 < layers) {
            activations.push_back((pre_activations[l].array().max(0.0)).matrix());
        }
    }

    const Eigen::VectorXd& z_out = pre_activations[layers - 1];
    Logits logits(std::vector<double>(z_out.data(), z_out.data() + z_out.size()));
    ProbVector prediction = softmax(logits);
    const double loss_value = evaluate_loss(loss, target, prediction, clip);

    MlpParams gradients = zeros_like(params);
    const std::vector<double> logit_grad = gradient_wrt_logits(loss, target, logits, clip);
    Eigen::VectorXd delta = Eigen::Map<const Eigen::VectorXd>(
        logit_grad.data(), static_cast<Eigen::Index>(logit_grad.size()));

    for (std::size_t l = layers; l-- > 0;) {
        gradients.weights[l] = delta * activations[l].transpose();
        gradients.biases[l] = delta;
        if (l > 0) {
            // ReLU'(z) = 1 for z > 0 and 0 otherwise, including at z == 0.
            const Eigen::ArrayXd gate = (pre_activations[l - 1].array() > 0.0).cast<double>();
            delta = ((params.weights[l].transpose() * delta).array() * gate).matrix();
        }
    }
    return BackpropResult{loss_value, std::move(gradients), std::move(prediction)};
}

MlpParams backward(const MlpParams& params, std::span<const double> x, const ProbVector& target,
                   LossId loss, const ClipPolicy& clip) {
    return backprop(params, x, target, loss, clip).gradients;
}

AdamState make_adam_state(const MlpParams& reference) {
    AdamState state;
    state.first_moment = zeros_like(reference);
    state.second_moment = zeros_like(reference);
    state.timestep = 0;
    return state;
}

void adam_step(MlpParams& params, const MlpParams& gradients, AdamState& state,
               const AdamConfig& cfg) {
    require_same_shape(params, gradients, "adam_step");
    require_same_shape(params, state.first_moment, "adam_step");
    state.timestep += 1;
    const double t = static_cast<double>(state.timestep);
    const double bias1 = 1.0 - std::pow(cfg.beta1, t);
    const double bias2 = 1.0 - std::pow(cfg.beta2, t);

    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        auto step = [&](auto& theta, const auto& grad, auto& m, auto& v) {
            m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
            v = (cfg.beta2 * v.array() + (1.0 - cfg.beta2) * grad.array().square()).matrix();
            const auto m_hat = m.array() / bias1;
            const auto v_hat = v.array() / bias2;
            theta = (theta.array() - cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.epsilon))
                        .matrix();
        };
        step(params.weights[l], gradients.weights[l], state.first_moment.weights[l],
             state.second_moment.weights[l]);
        step(params.biases[l], gradients.biases[l], state.first_moment.biases[l],
             state.second_moment.biases[l]);
    }
}

double max_abs_difference(const MlpParams& a, const MlpParams& b) {
    require_same_shape(a, b, "max_abs_difference");
    double max_diff = 0.0;
    for (std::size_t l = 0; l < a.weights.size(); ++l) {
        max_diff = std::max(max_diff, (a.weights[l] - b.weights[l]).cwiseAbs().maxCoeff());
        max_diff = std::max(max_diff, (a.biases[l] - b.biases[l]).cwiseAbs().maxCoeff());
    }
    return max_diff;
}

} // namespace bregbench
