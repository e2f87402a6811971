#ifndef BREGBENCH_TYPES_HPP
#define BREGBENCH_TYPES_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "bregbench/errors.hpp"

namespace bregbench {

/// A point on the K-simplex: K >= 2, entries in [0, 1], sum within 1e-9 of 1.
/// Used for both targets and predictions.
class ProbVector {
public:
    explicit ProbVector(std::vector<double> values) : values_(std::move(values)) {
        validate();
    }

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    std::span<const double> span() const { return values_; }

    friend bool operator==(const ProbVector&, const ProbVector&) = default;

    static constexpr double kSumTolerance = 1e-9;

private:
    void validate() const {
        if (values_.size() < 2)
            throw InvalidInputError("ProbVector: need at least 2 categories, got " +
                                    std::to_string(values_.size()));
        double sum = 0.0;
        for (double v : values_) {
            if (!(v >= 0.0 && v <= 1.0)) // catches NaN as well
                throw InvalidInputError("ProbVector: entry " + std::to_string(v) +
                                        " outside [0, 1]");
            sum += v;
        }
        if (std::abs(sum - 1.0) > kSumTolerance)
            throw InvalidInputError("ProbVector: entries sum to " + std::to_string(sum) +
                                    ", expected 1 within 1e-9");
    }

    std::vector<double> values_;
};

/// Unconstrained pre-softmax activations. All entries must be finite.
class Logits {
public:
    explicit Logits(std::vector<double> values) : values_(std::move(values)) {
        for (double v : values_)
            if (!std::isfinite(v))
                throw InvalidInputError("Logits: non-finite entry");
        if (values_.size() < 2)
            throw InvalidInputError("Logits: need at least 2 categories");
    }

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    std::span<const double> span() const { return values_; }

    friend bool operator==(const Logits&, const Logits&) = default;

private:
    std::vector<double> values_;
};

/// Guard for log and ratio terms: operands are clamped into [epsilon, 1]
/// inside those terms only. Difference terms are never clipped.
class ClipPolicy {
public:
    ClipPolicy() = default;
    explicit ClipPolicy(double epsilon) : epsilon_(epsilon) {
        if (!(epsilon > 0.0 && epsilon <= 1e-4))
            throw InvalidInputError("ClipPolicy: epsilon must be in (0, 1e-4], got " +
                                    std::to_string(epsilon));
    }

    double epsilon() const { return epsilon_; }

private:
    double epsilon_ = 1e-7;
};

} // namespace bregbench

#endif // BREGBENCH_TYPES_HPP
