#ifndef BREGBENCH_EXPERIMENT_HPP
#define BREGBENCH_EXPERIMENT_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bregbench/synth.hpp"
#include "bregbench/train.hpp"

namespace bregbench {

/// Fraction of instances assigned to the training split of every sweep cell.
inline constexpr double kTrainFraction = 0.7;

struct ExperimentConfig {
    /// Exactly one dataset source: generate synthetically or load from disk.
    std::optional<SynthConfig> synthetic;
    std::optional<std::filesystem::path> dataset_path;

    /// Template for every cell; `loss` comes from `losses` and `seed` is
    /// offset by the repetition index.
    TrainConfig train;
    std::vector<LossId> losses{all_losses().begin(), all_losses().end()};
    std::size_t repetitions = 4;
    double convergence_threshold = 0.05;
    std::filesystem::path output_dir = "out";
    std::size_t workers = 1;

    void validate() const;
};

/// One (loss, repetition) cell of the sweep.
struct CellResult {
    LossId loss = LossId::Mse;
    std::size_t repetition = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error; ///< set when !ok
    LossHistory loss_history;
    std::optional<std::size_t> convergence_epoch;
    MetricBundle train_metrics;
    MetricBundle test_metrics;
    double wall_time_seconds = 0.0;
};

struct MetricStats {
    double mean = 0.0;
    double stddev = 0.0; ///< population standard deviation over repetitions
};

struct LossAggregate {
    LossId loss = LossId::Mse;
    std::size_t cells_ok = 0;
    std::size_t cells_failed = 0;
    MetricStats train_macro_f1, test_macro_f1;
    MetricStats train_ndcg, test_ndcg;
    MetricStats train_acc_rank, test_acc_rank;
    std::size_t converged_repetitions = 0;
    std::optional<double> mean_convergence_epoch; ///< over converged repetitions
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<CellResult> cells;        ///< losses-major, repetitions-minor
    std::vector<LossAggregate> aggregates; ///< one per configured loss, in order
};

/// Runs the full loss x repetition sweep and writes the report files into
/// config.output_dir: table_{macro_f1,ndcg,acc_rank}.csv, curves_loss.csv,
/// curves_delta.csv, convergence.csv, report.json and summary.txt. A failed
/// cell is recorded and skipped in aggregates; it never aborts the sweep.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Renders the ranking-per-metric and convergence-ordering summary.
/// Convergence epochs are recomputed from the stored loss curves at the
/// given threshold, so the report can be re-rendered at other limits.
std::string emit_comparison(const ExperimentReport& report, double threshold);

/// File emission, exposed separately so tests can target a scratch directory.
void write_report_files(const ExperimentReport& report, const std::filesystem::path& dir);

} // namespace bregbench

#endif // BREGBENCH_EXPERIMENT_HPP
