#include "bregbench/train.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <string>

#include "bregbench/errors.hpp"
#include "bregbench/rng.hpp"

namespace bregbench {

namespace {

// Decorrelates the shuffle stream from glorot_init, which consumes Rng(seed).
constexpr std::uint64_t kShuffleStream = 0x9e3779b97f4a7c15ULL;

void accumulate(MlpParams& into, const MlpParams& grads) {
    for (std::size_t l = 0; l < into.weights.size(); ++l) {
        into.weights[l] += grads.weights[l];
        into.biases[l] += grads.biases[l];
    }
}

void scale(MlpParams& params, double factor) {
    for (std::size_t l = 0; l < params.weights.size(); ++l) {
        params.weights[l] *= factor;
        params.biases[l] *= factor;
    }
}

} // namespace

void TrainConfig::validate() const {
    if (epochs == 0) {
        throw InvalidInputError("TrainConfig: epochs must be at least 1");
    }
    if (batch_size == 0) {
        throw InvalidInputError("TrainConfig: batch_size must be at least 1");
    }
    if (!(learning_rate > 0.0)) {
        throw InvalidInputError("TrainConfig: learning_rate must be positive");
    }
    if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
        throw InvalidInputError("TrainConfig: betas must lie in [0, 1)");
    }
    if (!(adam_epsilon > 0.0)) {
        throw InvalidInputError("TrainConfig: adam_epsilon must be positive");
    }
    for (std::size_t h : hidden_sizes) {
        if (h == 0) {
            throw InvalidInputError("TrainConfig: zero-width hidden layer");
        }
    }
}

TrainReport train(const LabeledDataset& dataset, const TrainConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();

    std::vector<std::size_t> sizes;
    sizes.push_back(dataset.feature_dim());
    sizes.insert(sizes.end(), cfg.hidden_sizes.begin(), cfg.hidden_sizes.end());
    sizes.push_back(dataset.categories());

    TrainReport report;
    report.final_params = glorot_init(sizes, cfg.seed);
    AdamState adam = make_adam_state(report.final_params);
    const AdamConfig adam_cfg = cfg.adam();
    const ClipPolicy clip;

    const std::size_t n = dataset.size();
    const std::size_t batch_size = cfg.deterministic_full_batch ? n : cfg.batch_size;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng shuffle_rng(cfg.seed ^ kShuffleStream);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (!cfg.deterministic_full_batch) {
            shuffle_rng.shuffle(order);
        }
        double epoch_loss_sum = 0.0;
        for (std::size_t begin = 0; begin < n; begin += batch_size) {
            const std::size_t end = std::min(begin + batch_size, n);
            const std::size_t batch_index = begin / batch_size;
            MlpParams grad_sum = zeros_like(report.final_params);
            try {
                for (std::size_t i = begin; i < end; ++i) {
                    const LabeledInstance& inst = dataset[order[i]];
                    BackpropResult step =
                        backprop(report.final_params, inst.features, inst.target, cfg.loss, clip);
                    accumulate(grad_sum, step.gradients);
                    epoch_loss_sum += step.loss;
                }
                scale(grad_sum, 1.0 / static_cast<double>(end - begin));
                adam_step(report.final_params, grad_sum, adam, adam_cfg);
            } catch (const std::exception& e) {
                throw TrainError("epoch " + std::to_string(epoch) + ", batch " +
                                 std::to_string(batch_index) + ": " + e.what());
            }
        }
        report.loss_history.push_back(epoch_loss_sum / static_cast<double>(n));
        report.epochs_run = epoch + 1;
    }

    report.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<ProbVector> predict_all(const MlpParams& params, const LabeledDataset& dataset) {
    std::vector<ProbVector> predictions;
    predictions.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        predictions.push_back(forward(params, dataset[i].features).probabilities);
    }
    return predictions;
}

MetricBundle compute_metrics(std::span<const ProbVector> targets,
                             std::span<const ProbVector> predictions, const ClipPolicy& clip) {
    if (targets.empty()) {
        throw InvalidInputError("compute_metrics: need at least one instance");
    }
    MetricBundle bundle;
    bundle.macro_f1 = macro_f1(targets, predictions, targets.front().size());
    bundle.ndcg = ndcg(targets, predictions);
    bundle.acc_rank = accuracy_ranking_decrease(targets, predictions);
    for (LossId id : all_losses()) {
        bundle.mean_loss[id] = batch_loss(id, targets, predictions, clip);
    }
    return bundle;
}

MetricBundle evaluate(const MlpParams& params, const LabeledDataset& dataset,
                      const ClipPolicy& clip) {
    std::vector<ProbVector> predictions = predict_all(params, dataset);
    std::vector<ProbVector> targets;
    targets.reserve(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        targets.push_back(dataset[i].target);
    }
    return compute_metrics(targets, predictions, clip);
}

} // namespace bregbench
