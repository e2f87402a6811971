#ifndef BREGBENCH_TRAIN_HPP
#define BREGBENCH_TRAIN_HPP

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "bregbench/dataset.hpp"
#include "bregbench/metrics.hpp"
#include "bregbench/mlp.hpp"

namespace bregbench {

struct TrainConfig {
    LossId loss = LossId::CrossEntropy;
    std::vector<std::size_t> hidden_sizes; ///< empty means a single linear layer
    std::size_t epochs = 20;
    std::size_t batch_size = 128;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::uint64_t seed = 0;
    /// When set, every epoch runs one full-batch update with no shuffling,
    /// so two losses with identical gradients produce bitwise-identical
    /// parameter trajectories.
    bool deterministic_full_batch = false;

    AdamConfig adam() const { return {learning_rate, beta1, beta2, adam_epsilon}; }
    void validate() const;
};

struct TrainReport {
    LossHistory loss_history; ///< one entry per epoch, mean over samples
    MlpParams final_params;
    double wall_time_seconds = 0.0;
    std::size_t epochs_run = 0;
};

/// Trains an MLP on the dataset. Epoch losses are the sample-weighted mean
/// of batch losses computed before each update. Numeric failures surface as
/// TrainError carrying the epoch and batch index.
TrainReport train(const LabeledDataset& dataset, const TrainConfig& cfg);

struct MetricBundle {
    double macro_f1 = 0.0;
    double ndcg = 0.0;
    double acc_rank = 0.0;
    std::map<LossId, double> mean_loss; ///< every objective scored on the same pairs
};

MetricBundle compute_metrics(std::span<const ProbVector> targets,
                             std::span<const ProbVector> predictions,
                             const ClipPolicy& clip = ClipPolicy());

/// Runs the network over the dataset and scores the predictions.
MetricBundle evaluate(const MlpParams& params, const LabeledDataset& dataset,
                      const ClipPolicy& clip = ClipPolicy());

/// Forward pass over every instance, in order.
std::vector<ProbVector> predict_all(const MlpParams& params, const LabeledDataset& dataset);

} // namespace bregbench

#endif // BREGBENCH_TRAIN_HPP
