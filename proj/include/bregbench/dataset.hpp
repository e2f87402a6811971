#ifndef BREGBENCH_DATASET_HPP
#define BREGBENCH_DATASET_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "bregbench/types.hpp"

namespace bregbench {

/// Per-category annotation counts for one instance.
class RepeatsVector {
public:
    explicit RepeatsVector(std::vector<std::int64_t> counts) : counts_(std::move(counts)) {
        if (counts_.size() < 2)
            throw InvalidInputError("RepeatsVector: need at least 2 categories");
        for (std::int64_t c : counts_)
            if (c < 0)
                throw InvalidInputError("RepeatsVector: negative count " + std::to_string(c));
    }

    std::size_t size() const { return counts_.size(); }
    std::int64_t operator[](std::size_t i) const { return counts_[i]; }
    const std::vector<std::int64_t>& counts() const { return counts_; }
    std::int64_t total() const {
        std::int64_t t = 0;
        for (std::int64_t c : counts_)
            t += c;
        return t;
    }

    friend bool operator==(const RepeatsVector&, const RepeatsVector&) = default;

private:
    std::vector<std::int64_t> counts_;
};

/// p_j = r_j / sum_l r_l. Zeros are preserved; smoothing is the loss
/// module's clipping concern. Throws InvalidInputError on an all-zero vector.
ProbVector normalize_repeats(const RepeatsVector& r);

struct LabeledInstance {
    std::vector<double> features;
    ProbVector target;
    std::optional<RepeatsVector> repeats;

    friend bool operator==(const LabeledInstance&, const LabeledInstance&) = default;
};

/// Homogeneous collection of (features, target) pairs.
class LabeledDataset {
public:
    explicit LabeledDataset(std::vector<LabeledInstance> instances);

    const std::vector<LabeledInstance>& instances() const { return instances_; }
    const LabeledInstance& operator[](std::size_t i) const { return instances_[i]; }
    std::size_t size() const { return instances_.size(); }
    std::size_t feature_dim() const { return feature_dim_; }
    std::size_t categories() const { return categories_; }

    friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;

private:
    std::vector<LabeledInstance> instances_;
    std::size_t feature_dim_ = 0;
    std::size_t categories_ = 0;
};

/// Seeded shuffle followed by a prefix split: floor(N * train_fraction)
/// instances for training, the remainder for test. Disjoint and exhaustive.
std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& ds, double train_fraction,
                                                std::uint64_t seed);

/// Plain-text dataset file:
///   line 1: `#meta,d=<d>,K=<K>,N=<N>`
///   rows:   `x_1,...,x_d,p_1,...,p_K` with 17-significant-digit reals.
/// Repeats are not persisted.
void save_dataset(const LabeledDataset& ds, const std::filesystem::path& path);

/// Inverse of save_dataset. Throws FormatError (naming the line) on malformed
/// rows, non-numeric fields, or targets off the simplex beyond 1e-6. Targets
/// within 1e-6 but beyond the ProbVector tolerance are renormalized.
LabeledDataset load_dataset(const std::filesystem::path& path);

} // namespace bregbench

#endif // BREGBENCH_DATASET_HPP
