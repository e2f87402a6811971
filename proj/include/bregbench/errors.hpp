#ifndef BREGBENCH_ERRORS_HPP
#define BREGBENCH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bregbench {

/// Malformed or out-of-range input (bad config values, empty batches,
/// degenerate repeats, non-finite logits).
struct InvalidInputError : std::invalid_argument {
    explicit InvalidInputError(const std::string& what) : std::invalid_argument(what) {}
};

/// Dimension disagreement between paired vectors or between data and model.
struct ShapeError : std::invalid_argument {
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// A numeric evaluation left its domain (NaN result, log/division of an
/// unclipped boundary value).
struct NumericDomainError : std::runtime_error {
    explicit NumericDomainError(const std::string& what) : std::runtime_error(what) {}
};

/// The RMSE derivative 1/(2*RMSE) is unbounded near a perfect fit; raised
/// when the mean squared error falls under the 1e-12 floor.
struct SingularGradientError : NumericDomainError {
    explicit SingularGradientError(const std::string& what) : NumericDomainError(what) {}
};

/// Division by a zero (or negative) loss value in the convergence delta.
struct DivisionDomainError : NumericDomainError {
    explicit DivisionDomainError(const std::string& what) : NumericDomainError(what) {}
};

/// Malformed dataset or config file; message names the offending line.
struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Failure inside a training run, annotated with epoch/batch indices.
struct TrainError : std::runtime_error {
    explicit TrainError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace bregbench

#endif // BREGBENCH_ERRORS_HPP
