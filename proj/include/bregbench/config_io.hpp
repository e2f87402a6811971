#ifndef BREGBENCH_CONFIG_IO_HPP
#define BREGBENCH_CONFIG_IO_HPP

#include <filesystem>
#include <string>

#include "bregbench/experiment.hpp"
#include "bregbench/synth.hpp"

namespace bregbench {

/// Parses an experiment config from JSON text. The schema mirrors
/// ExperimentConfig: a required "dataset" object holding either "synthetic"
/// or "file", an optional "train" object, and optional top-level
/// "losses", "repetitions", "convergence_threshold", "output_dir" and
/// "workers". Unknown keys anywhere are errors (InvalidInputError), as are
/// type mismatches and malformed JSON.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Config for `bench gen`: either a bare synthetic-dataset object
/// ("instances", "feature_dim", ...) or a full experiment config, whose
/// synthetic dataset source is used.
SynthConfig parse_gen_config(const std::string& json_text);
SynthConfig load_gen_config(const std::filesystem::path& path);

} // namespace bregbench

#endif // BREGBENCH_CONFIG_IO_HPP
