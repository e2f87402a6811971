#ifndef BREGBENCH_SYNTH_HPP
#define BREGBENCH_SYNTH_HPP

#include <cstdint>
#include <vector>

#include "bregbench/dataset.hpp"
#include "bregbench/types.hpp"

namespace bregbench {

/// Knobs for the synthetic crowd-annotation generator.
struct SynthConfig {
    std::size_t instances = 0;          ///< N
    std::size_t feature_dim = 0;        ///< d
    std::size_t categories = 0;         ///< K
    std::size_t annotators_per_item = 0;///< R, multinomial draws per instance
    std::size_t teacher_hidden = 0;     ///< hidden units of the teacher net
    double temperature = 1.0;           ///< softens (>1) or sharpens (<1) ground truths
    std::uint64_t seed = 0;

    void validate() const;
};

/// Generated dataset plus the (noise-free) distributions the annotations
/// were drawn from, aligned with the dataset instances.
struct SyntheticData {
    LabeledDataset dataset;
    std::vector<ProbVector> ground_truth;
};

/// Deterministic in the seed. Features are standard normal; a fixed random
/// one-hidden-layer tanh teacher maps them to logits; ground truth is
/// softmax(logits / temperature); R annotations per instance are drawn from
/// the ground truth and normalized into the target.
SyntheticData generate_synthetic(const SynthConfig& cfg);

} // namespace bregbench

#endif // BREGBENCH_SYNTH_HPP
