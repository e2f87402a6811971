#include "bregbench/synth.hpp"

#include <cmath>
#include <string>

#include "bregbench/errors.hpp"
#include "bregbench/losses.hpp"
#include "bregbench/rng.hpp"

namespace bregbench {

void SynthConfig::validate() const {
    if (instances < 1)
        throw InvalidInputError("SynthConfig: instances must be >= 1");
    if (feature_dim < 1)
        throw InvalidInputError("SynthConfig: feature_dim must be >= 1");
    if (categories < 2)
        throw InvalidInputError("SynthConfig: categories must be >= 2");
    if (annotators_per_item < 1)
        throw InvalidInputError("SynthConfig: annotators_per_item must be >= 1");
    if (teacher_hidden < 1)
        throw InvalidInputError("SynthConfig: teacher_hidden must be >= 1");
    if (!(temperature > 0.0))
        throw InvalidInputError("SynthConfig: temperature must be positive");
}

namespace {

// Row-major (rows x cols) matrix with entries N(0, 1/cols).
std::vector<double> random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
    std::vector<double> m(rows * cols);
    const double scale = 1.0 / std::sqrt(static_cast<double>(cols));
    for (double& v : m)
        v = rng.normal() * scale;
    return m;
}

} // namespace

SyntheticData generate_synthetic(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    const std::size_t d = cfg.feature_dim;
    const std::size_t h = cfg.teacher_hidden;
    const std::size_t k = cfg.categories;
    const auto w_hidden = random_matrix(rng, h, d);
    const auto w_out = random_matrix(rng, k, h);

    std::vector<LabeledInstance> instances;
    std::vector<ProbVector> ground_truth;
    instances.reserve(cfg.instances);
    ground_truth.reserve(cfg.instances);

    std::vector<double> features(d), hidden(h), logits(k);
    for (std::size_t i = 0; i < cfg.instances; ++i) {
        for (double& x : features)
            x = rng.normal();

        for (std::size_t r = 0; r < h; ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < d; ++c)
                acc += w_hidden[r * d + c] * features[c];
            hidden[r] = std::tanh(acc);
        }
        for (std::size_t r = 0; r < k; ++r) {
            double acc = 0.0;
            for (std::size_t c = 0; c < h; ++c)
                acc += w_out[r * h + c] * hidden[c];
            logits[r] = acc / cfg.temperature;
        }

        ProbVector truth = softmax(Logits(logits));

        std::vector<std::int64_t> counts(k, 0);
        for (std::size_t a = 0; a < cfg.annotators_per_item; ++a)
            ++counts[rng.categorical(truth.span())];
        RepeatsVector repeats(std::move(counts));

        instances.push_back(LabeledInstance{features, normalize_repeats(repeats), repeats});
        ground_truth.push_back(std::move(truth));
    }

    return SyntheticData{LabeledDataset(std::move(instances)), std::move(ground_truth)};
}

} // namespace bregbench
