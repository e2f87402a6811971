#include "bregbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bregbench/errors.hpp"

namespace bregbench {

namespace {

void require_paired(std::span<const ProbVector> targets, std::span<const ProbVector> predictions,
                    const char* where) {
    if (targets.size() != predictions.size())
        throw ShapeError(std::string(where) + ": instance count mismatch (" +
                         std::to_string(targets.size()) + " vs " +
                         std::to_string(predictions.size()) + ")");
    if (targets.empty())
        throw InvalidInputError(std::string(where) + ": empty instance sequence");
    for (std::size_t i = 0; i < targets.size(); ++i)
        if (targets[i].size() != predictions[i].size())
            throw ShapeError(std::string(where) + ": category count mismatch at instance " +
                             std::to_string(i));
}

std::size_t argmax_category(const ProbVector& p) { return rank_categories(p)[0]; }

} // namespace

RankPermutation rank_categories(const ProbVector& p) {
    RankPermutation order(p.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&p](std::size_t a, std::size_t b) {
        if (p[a] != p[b])
            return p[a] > p[b];
        return a < b;
    });
    return order;
}

std::vector<double> convergence_delta(const LossHistory& h) {
    if (h.size() < 2)
        throw InvalidInputError("convergence_delta: need at least 2 epochs, got " +
                                std::to_string(h.size()));
    for (double v : h)
        if (!std::isfinite(v))
            throw InvalidInputError("convergence_delta: non-finite loss value");
    std::vector<double> deltas(h.size() - 1);
    for (std::size_t t = 0; t + 1 < h.size(); ++t) {
        if (!(h[t] > 0.0))
            throw DivisionDomainError("convergence_delta: loss at epoch " + std::to_string(t) +
                                      " is " + std::to_string(h[t]) +
                                      ", positive divisor required");
        deltas[t] = std::abs(h[t] - h[t + 1]) / h[t];
    }
    return deltas;
}

std::optional<std::size_t> epochs_to_converge(const LossHistory& h, double threshold) {
    if (!(threshold > 0.0))
        throw InvalidInputError("epochs_to_converge: threshold must be positive");
    const auto deltas = convergence_delta(h);
    // Convergence must be sustained: every delta from t onward stays under
    // the threshold.
    std::size_t t = deltas.size();
    while (t > 0 && deltas[t - 1] < threshold)
        --t;
    if (t == deltas.size())
        return std::nullopt;
    return t;
}

ConfusionCounts confusion_counts(std::span<const ProbVector> targets,
                                 std::span<const ProbVector> predictions, std::size_t k) {
    require_paired(targets, predictions, "confusion_counts");
    for (const auto& p : targets)
        if (p.size() != k)
            throw ShapeError("confusion_counts: expected " + std::to_string(k) +
                             " categories, got " + std::to_string(p.size()));
    ConfusionCounts c;
    c.true_positives.assign(k, 0);
    c.false_positives.assign(k, 0);
    c.false_negatives.assign(k, 0);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const std::size_t truth = argmax_category(targets[i]);
        const std::size_t guess = argmax_category(predictions[i]);
        if (truth == guess) {
            ++c.true_positives[truth];
        } else {
            ++c.false_negatives[truth];
            ++c.false_positives[guess];
        }
    }
    return c;
}

double macro_f1(std::span<const ProbVector> targets, std::span<const ProbVector> predictions,
                std::size_t k) {
    const ConfusionCounts c = confusion_counts(targets, predictions, k);
    double total = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const double tp = static_cast<double>(c.true_positives[j]);
        const double fp = static_cast<double>(c.false_positives[j]);
        const double fn = static_cast<double>(c.false_negatives[j]);
        const double precision = tp + fp > 0.0 ? tp / (tp + fp) : 0.0;
        const double recall = tp + fn > 0.0 ? tp / (tp + fn) : 0.0;
        if (precision + recall > 0.0)
            total += 2.0 * precision * recall / (precision + recall);
        // else: the category contributes 0 to the macro average.
    }
    return total / static_cast<double>(k);
}

double ndcg(std::span<const ProbVector> targets, std::span<const ProbVector> predictions) {
    require_paired(targets, predictions, "ndcg");
    double total = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto predicted_order = rank_categories(predictions[i]);
        const auto ideal_order = rank_categories(targets[i]);
        double dcg = 0.0, idcg = 0.0;
        for (std::size_t pos = 0; pos < predicted_order.size(); ++pos) {
            const double discount = 1.0 / std::log2(static_cast<double>(pos) + 2.0);
            dcg += targets[i][predicted_order[pos]] * discount;
            idcg += targets[i][ideal_order[pos]] * discount;
        }
        total += dcg / idcg;
    }
    return total / static_cast<double>(targets.size());
}

double accuracy_ranking_decrease(std::span<const ProbVector> targets,
                                 std::span<const ProbVector> predictions) {
    require_paired(targets, predictions, "accuracy_ranking_decrease");
    double total = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto true_order = rank_categories(targets[i]);
        const auto predicted_order = rank_categories(predictions[i]);
        double acc = 0.0;
        for (std::size_t pos = 0; pos < true_order.size(); ++pos)
            if (true_order[pos] == predicted_order[pos])
                acc += 1.0 / static_cast<double>(pos + 1);
        total += acc / static_cast<double>(true_order.size());
    }
    return total / static_cast<double>(targets.size());
}

} // namespace bregbench
