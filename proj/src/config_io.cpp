#include "bregbench/config_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "bregbench/errors.hpp"

namespace bregbench {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& context) {
    if (!j.is_object()) {
        throw InvalidInputError(context + ": expected an object");
    }
}

void reject_unknown_keys(const json& obj, const std::string& context,
                         std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw InvalidInputError(context + ": unknown key '" + key + "'");
        }
    }
}

template <typename T>
T get_as(const json& obj, const std::string& context, const char* key, T fallback) {
    if (!obj.contains(key)) {
        return fallback;
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidInputError(context + ": key '" + std::string(key) + "' has the wrong type");
    }
}

template <typename T>
T get_required(const json& obj, const std::string& context, const char* key) {
    if (!obj.contains(key)) {
        throw InvalidInputError(context + ": missing required key '" + std::string(key) + "'");
    }
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw InvalidInputError(context + ": key '" + std::string(key) + "' has the wrong type");
    }
}

SynthConfig parse_synth_object(const json& obj, const std::string& context) {
    require_object(obj, context);
    reject_unknown_keys(obj, context,
                        {"instances", "feature_dim", "categories", "annotators_per_item",
                         "teacher_hidden", "temperature", "seed"});
    SynthConfig cfg;
    cfg.instances = get_required<std::size_t>(obj, context, "instances");
    cfg.feature_dim = get_required<std::size_t>(obj, context, "feature_dim");
    cfg.categories = get_required<std::size_t>(obj, context, "categories");
    cfg.annotators_per_item = get_required<std::size_t>(obj, context, "annotators_per_item");
    cfg.teacher_hidden = get_required<std::size_t>(obj, context, "teacher_hidden");
    cfg.temperature = get_as<double>(obj, context, "temperature", cfg.temperature);
    cfg.seed = get_as<std::uint64_t>(obj, context, "seed", cfg.seed);
    return cfg;
}

TrainConfig parse_train_object(const json& obj, const std::string& context) {
    require_object(obj, context);
    // "loss" is deliberately absent: the sweep assigns it from "losses".
    reject_unknown_keys(obj, context,
                        {"hidden_sizes", "epochs", "batch_size", "learning_rate", "beta1",
                         "beta2", "adam_epsilon", "seed", "deterministic_full_batch"});
    TrainConfig cfg;
    cfg.hidden_sizes =
        get_as<std::vector<std::size_t>>(obj, context, "hidden_sizes", cfg.hidden_sizes);
    cfg.epochs = get_as<std::size_t>(obj, context, "epochs", cfg.epochs);
    cfg.batch_size = get_as<std::size_t>(obj, context, "batch_size", cfg.batch_size);
    cfg.learning_rate = get_as<double>(obj, context, "learning_rate", cfg.learning_rate);
    cfg.beta1 = get_as<double>(obj, context, "beta1", cfg.beta1);
    cfg.beta2 = get_as<double>(obj, context, "beta2", cfg.beta2);
    cfg.adam_epsilon = get_as<double>(obj, context, "adam_epsilon", cfg.adam_epsilon);
    cfg.seed = get_as<std::uint64_t>(obj, context, "seed", cfg.seed);
    cfg.deterministic_full_batch =
        get_as<bool>(obj, context, "deterministic_full_batch", cfg.deterministic_full_batch);
    return cfg;
}

json parse_json_text(const std::string& text, const std::string& context) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidInputError(context + ": " + e.what());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInputError("cannot read config file '" + path.string() + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return std::move(buffer).str();
}

} // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    const std::string context = "experiment config";
    const json root = parse_json_text(json_text, context);
    require_object(root, context);
    reject_unknown_keys(root, context,
                        {"dataset", "train", "losses", "repetitions", "convergence_threshold",
                         "output_dir", "workers"});

    ExperimentConfig cfg;
    if (!root.contains("dataset")) {
        throw InvalidInputError(context + ": missing required key 'dataset'");
    }
    const json& dataset = root.at("dataset");
    require_object(dataset, context + ".dataset");
    reject_unknown_keys(dataset, context + ".dataset", {"synthetic", "file"});
    const bool has_synth = dataset.contains("synthetic");
    const bool has_file = dataset.contains("file");
    if (has_synth == has_file) {
        throw InvalidInputError(context +
                                ".dataset: exactly one of 'synthetic' or 'file' is required");
    }
    if (has_synth) {
        cfg.synthetic = parse_synth_object(dataset.at("synthetic"), context + ".dataset.synthetic");
    } else {
        cfg.dataset_path =
            get_required<std::string>(dataset, context + ".dataset", "file");
    }

    if (root.contains("train")) {
        cfg.train = parse_train_object(root.at("train"), context + ".train");
    }
    if (root.contains("losses")) {
        const auto names =
            get_required<std::vector<std::string>>(root, context, "losses");
        cfg.losses.clear();
        for (const std::string& name : names) {
            cfg.losses.push_back(loss_from_name(name));
        }
    }
    cfg.repetitions = get_as<std::size_t>(root, context, "repetitions", cfg.repetitions);
    cfg.convergence_threshold =
        get_as<double>(root, context, "convergence_threshold", cfg.convergence_threshold);
    cfg.output_dir = get_as<std::string>(root, context, "output_dir", cfg.output_dir.string());
    cfg.workers = get_as<std::size_t>(root, context, "workers", cfg.workers);

    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
    return parse_experiment_config(read_file(path));
}

SynthConfig parse_gen_config(const std::string& json_text) {
    const std::string context = "gen config";
    const json root = parse_json_text(json_text, context);
    require_object(root, context);
    if (root.contains("dataset")) {
        ExperimentConfig cfg = parse_experiment_config(json_text);
        if (!cfg.synthetic) {
            throw InvalidInputError(context +
                                    ": experiment config must use a synthetic dataset source");
        }
        return *cfg.synthetic;
    }
    SynthConfig cfg = parse_synth_object(root, context);
    cfg.validate();
    return cfg;
}

SynthConfig load_gen_config(const std::filesystem::path& path) {
    return parse_gen_config(read_file(path));
}

} // namespace bregbench
