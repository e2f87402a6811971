#include "bregbench/cli.hpp"

#include <chrono>
#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "bregbench/checks.hpp"
#include "bregbench/config_io.hpp"
#include "bregbench/dataset.hpp"
#include "bregbench/errors.hpp"
#include "bregbench/experiment.hpp"
#include "bregbench/synth.hpp"

namespace bregbench {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 1;
constexpr int kExitPartialFailure = 2;
constexpr int kExitTotalFailure = 3;

int run_command(const std::string& config_path) {
    ExperimentConfig cfg;
    try {
        cfg = load_experiment_config(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    }
    try {
        const auto start = std::chrono::steady_clock::now();
        const ExperimentReport report = run_experiment(cfg);
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        std::size_t failed = 0;
        for (const CellResult& cell : report.cells) {
            if (!cell.ok) {
                ++failed;
                std::fprintf(stderr, "cell %s/rep%zu failed: %s\n",
                             loss_name(cell.loss).c_str(), cell.repetition, cell.error.c_str());
            }
        }
        std::fputs(emit_comparison(report, cfg.convergence_threshold).c_str(), stdout);
        std::printf("%zu/%zu cells succeeded in %.1f s; reports in %s\n",
                    report.cells.size() - failed, report.cells.size(), elapsed,
                    cfg.output_dir.string().c_str());
        if (failed == report.cells.size()) {
            return kExitTotalFailure;
        }
        return failed > 0 ? kExitPartialFailure : kExitOk;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitTotalFailure;
    }
}

int gen_command(const std::string& config_path, const std::string& out_path) {
    SynthConfig cfg;
    try {
        cfg = load_gen_config(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    }
    try {
        const SyntheticData data = generate_synthetic(cfg);
        save_dataset(data.dataset, out_path);
        std::printf("wrote %zu instances (d=%zu, K=%zu) to %s\n", data.dataset.size(),
                    data.dataset.feature_dim(), data.dataset.categories(), out_path.c_str());
        return kExitOk;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitTotalFailure;
    }
}

int check_command() {
    const std::vector<CheckResult> results = run_property_checks();
    std::size_t failed = 0;
    for (const CheckResult& r : results) {
        std::printf("%s  %s (%s)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        if (!r.pass) {
            ++failed;
        }
    }
    std::printf("%zu/%zu checks passed\n", results.size() - failed, results.size());
    return failed == 0 ? kExitOk : kExitTotalFailure;
}

} // namespace

int bench_main(int argc, const char* const* argv) {
    CLI::App app{"Benchmark harness for distribution-target losses"};
    app.require_subcommand(1);

    std::string run_config;
    CLI::App* run = app.add_subcommand("run", "Sweep losses x repetitions and write reports");
    run->add_option("--config", run_config, "Experiment config (JSON)")->required();

    std::string gen_config;
    std::string gen_out;
    CLI::App* gen = app.add_subcommand("gen", "Generate a synthetic crowd-labeled dataset");
    gen->add_option("--config", gen_config, "Generator config (JSON)")->required();
    gen->add_option("--out", gen_out, "Output dataset path")->required();

    CLI::App* check = app.add_subcommand("check", "Run the invariant and property suite");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    if (run->parsed()) {
        return run_command(run_config);
    }
    if (gen->parsed()) {
        return gen_command(gen_config, gen_out);
    }
    if (check->parsed()) {
        return check_command();
    }
    return kExitConfigError;
}

} // namespace bregbench
