#ifndef BREGBENCH_METRICS_HPP
#define BREGBENCH_METRICS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bregbench/types.hpp"

namespace bregbench {

/// Per-epoch training-loss values, indexed by epoch.
using LossHistory = std::vector<double>;

/// Category indices ordered by descending probability; ties broken by
/// ascending index.
using RankPermutation = std::vector<std::size_t>;

/// Per-category argmax confusion tallies.
struct ConfusionCounts {
    std::vector<std::int64_t> true_positives;
    std::vector<std::int64_t> false_positives;
    std::vector<std::int64_t> false_negatives;
};

RankPermutation rank_categories(const ProbVector& p);

/// Relative epoch-to-epoch change |h[t] - h[t+1]| / h[t] for
/// t = 0 .. len-2. Entries in divisor positions must be positive.
std::vector<double> convergence_delta(const LossHistory& h);

/// Smallest epoch t whose delta, and every later delta, stays under the
/// threshold; empty if the tail never settles.
std::optional<std::size_t> epochs_to_converge(const LossHistory& h, double threshold = 0.05);

ConfusionCounts confusion_counts(std::span<const ProbVector> targets,
                                 std::span<const ProbVector> predictions, std::size_t k);

/// Unweighted mean of per-category F1 on the argmax categories. A category
/// with zero precision+recall contributes 0.
double macro_f1(std::span<const ProbVector> targets, std::span<const ProbVector> predictions,
                std::size_t k);

/// Normalized discounted cumulative gain of the predicted category ordering.
/// Gain of rank k (1-based) is the true probability of the category placed
/// there, discount 1/log2(k+1), normalized per instance by the ideal
/// ordering, averaged over instances.
double ndcg(std::span<const ProbVector> targets, std::span<const ProbVector> predictions);

/// Position-discounted agreement between the true and predicted rankings:
/// mean over instances of (1/K) sum_k I(rank match at k)/k. The maximum is
/// H_K/K, not 1.
double accuracy_ranking_decrease(std::span<const ProbVector> targets,
                                 std::span<const ProbVector> predictions);

} // namespace bregbench

#endif // BREGBENCH_METRICS_HPP
