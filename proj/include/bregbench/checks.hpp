#ifndef BREGBENCH_CHECKS_HPP
#define BREGBENCH_CHECKS_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace bregbench {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail; ///< worst-case magnitudes or the first failure
};

/// Individual property checks. Each is deterministic in its seed and
/// self-contained; tolerances are fixed inside the implementation.
CheckResult check_nonnegativity_and_identity(std::size_t pairs, std::uint64_t seed);
CheckResult check_bregman_consistency(std::size_t pairs, std::uint64_t seed);
CheckResult check_eq15_value(std::size_t pairs, std::uint64_t seed);
CheckResult check_eq15_logit_gradient(std::size_t pairs, std::uint64_t seed);
CheckResult check_geni_equals_forward_kl(std::size_t pairs, std::uint64_t seed);
CheckResult check_sse_mse_scaling(std::size_t pairs, std::uint64_t seed);
CheckResult check_prediction_gradients(std::size_t points_per_loss, std::uint64_t seed);
CheckResult check_logit_gradients(std::size_t points_per_loss, std::uint64_t seed);
CheckResult check_mlp_gradients(std::size_t points, std::uint64_t seed);
CheckResult check_mean_minimizer(std::size_t points, std::uint64_t seed);
CheckResult check_metric_examples();
CheckResult check_dataset_roundtrip(std::uint64_t seed);

/// The full suite at default sizes; what `bench check` runs.
std::vector<CheckResult> run_property_checks();

} // namespace bregbench

#endif // BREGBENCH_CHECKS_HPP
