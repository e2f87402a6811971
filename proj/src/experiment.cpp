#include "bregbench/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bregbench/errors.hpp"
#include "real_format.hpp"

namespace bregbench {

namespace {

using detail::format_fixed3;
using detail::format_real;
using ordered_json = nlohmann::ordered_json;

double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) {
        sum += x;
    }
    return sum / static_cast<double>(xs.size());
}

MetricStats stats_of(const std::vector<double>& xs) {
    if (xs.empty()) {
        return {};
    }
    MetricStats s;
    s.mean = mean_of(xs);
    double sq = 0.0;
    for (double x : xs) {
        sq += (x - s.mean) * (x - s.mean);
    }
    s.stddev = std::sqrt(sq / static_cast<double>(xs.size()));
    return s;
}

CellResult run_cell(const LabeledDataset& base, const ExperimentConfig& cfg, LossId loss,
                    std::size_t repetition) {
    CellResult cell;
    cell.loss = loss;
    cell.repetition = repetition;
    cell.seed = cfg.train.seed + repetition;
    const auto start = std::chrono::steady_clock::now();
    try {
        const auto [train_split, test_split] = split(base, kTrainFraction, cell.seed);
        TrainConfig tc = cfg.train;
        tc.loss = loss;
        tc.seed = cell.seed;
        TrainReport trained = train(train_split, tc);
        cell.loss_history = trained.loss_history;
        cell.convergence_epoch =
            epochs_to_converge(trained.loss_history, cfg.convergence_threshold);
        cell.train_metrics = evaluate(trained.final_params, train_split);
        cell.test_metrics = evaluate(trained.final_params, test_split);
        cell.ok = true;
    } catch (const std::exception& e) {
        cell.ok = false;
        cell.error = e.what();
    }
    cell.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return cell;
}

// True when the row holds the best mean in this column among rows with data.
std::vector<bool> best_flags(const std::vector<LossAggregate>& aggregates,
                             MetricStats LossAggregate::*column) {
    double best = -1.0;
    bool any = false;
    for (const auto& agg : aggregates) {
        if (agg.cells_ok > 0) {
            best = std::max(best, (agg.*column).mean);
            any = true;
        }
    }
    std::vector<bool> flags(aggregates.size(), false);
    for (std::size_t i = 0; i < aggregates.size(); ++i) {
        flags[i] = any && aggregates[i].cells_ok > 0 && (aggregates[i].*column).mean == best;
    }
    return flags;
}

void write_metric_table(const std::filesystem::path& path,
                        const std::vector<LossAggregate>& aggregates,
                        MetricStats LossAggregate::*train_col,
                        MetricStats LossAggregate::*test_col) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FormatError("cannot open '" + path.string() + "' for writing");
    }
    const std::vector<bool> best_train = best_flags(aggregates, train_col);
    const std::vector<bool> best_test = best_flags(aggregates, test_col);
    out << "loss,bregman,train_mean,train_std,test_mean,test_std,best_train,best_test\n";
    for (std::size_t i = 0; i < aggregates.size(); ++i) {
        const auto& agg = aggregates[i];
        out << loss_name(agg.loss) << ',' << (is_bregman(agg.loss) ? "yes" : "no") << ',';
        if (agg.cells_ok == 0) {
            out << "na,na,na,na";
        } else {
            out << format_fixed3(100.0 * (agg.*train_col).mean) << ','
                << format_fixed3(100.0 * (agg.*train_col).stddev) << ','
                << format_fixed3(100.0 * (agg.*test_col).mean) << ','
                << format_fixed3(100.0 * (agg.*test_col).stddev);
        }
        out << ',' << (best_train[i] ? 1 : 0) << ',' << (best_test[i] ? 1 : 0) << '\n';
    }
}

void write_curves(const ExperimentReport& report, const std::filesystem::path& loss_path,
                  const std::filesystem::path& delta_path) {
    std::ofstream loss_out(loss_path, std::ios::binary);
    std::ofstream delta_out(delta_path, std::ios::binary);
    if (!loss_out || !delta_out) {
        throw FormatError("cannot open curve files under '" +
                          loss_path.parent_path().string() + "' for writing");
    }
    loss_out << "loss,repetition,epoch,value\n";
    delta_out << "loss,repetition,epoch,value\n";
    for (const auto& cell : report.cells) {
        if (!cell.ok) {
            continue;
        }
        for (std::size_t t = 0; t < cell.loss_history.size(); ++t) {
            loss_out << loss_name(cell.loss) << ',' << cell.repetition << ',' << t << ','
                     << format_real(cell.loss_history[t]) << '\n';
        }
        const std::vector<double> deltas = convergence_delta(cell.loss_history);
        for (std::size_t t = 0; t < deltas.size(); ++t) {
            delta_out << loss_name(cell.loss) << ',' << cell.repetition << ',' << t << ','
                      << format_real(deltas[t]) << '\n';
        }
    }
}

void write_convergence(const ExperimentReport& report, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FormatError("cannot open '" + path.string() + "' for writing");
    }
    out << "loss,repetition,epochs_to_converge\n";
    for (const auto& cell : report.cells) {
        out << loss_name(cell.loss) << ',' << cell.repetition << ',';
        if (!cell.ok) {
            out << "error";
        } else if (cell.convergence_epoch) {
            out << *cell.convergence_epoch;
        } else {
            out << "na";
        }
        out << '\n';
    }
}

ordered_json metrics_to_json(const MetricBundle& m) {
    ordered_json j;
    j["macro_f1"] = m.macro_f1;
    j["ndcg"] = m.ndcg;
    j["acc_rank"] = m.acc_rank;
    ordered_json losses = ordered_json::object();
    for (const auto& [id, value] : m.mean_loss) {
        losses[loss_name(id)] = value;
    }
    j["mean_loss"] = std::move(losses);
    return j;
}

ordered_json stats_to_json(const MetricStats& s) {
    return ordered_json{{"mean", s.mean}, {"stddev", s.stddev}};
}

ordered_json config_to_json(const ExperimentConfig& cfg) {
    ordered_json j;
    if (cfg.synthetic) {
        const SynthConfig& s = *cfg.synthetic;
        j["dataset"] = ordered_json{{"synthetic",
                                     ordered_json{{"instances", s.instances},
                                                  {"feature_dim", s.feature_dim},
                                                  {"categories", s.categories},
                                                  {"annotators_per_item", s.annotators_per_item},
                                                  {"teacher_hidden", s.teacher_hidden},
                                                  {"temperature", s.temperature},
                                                  {"seed", s.seed}}}};
    } else {
        j["dataset"] = ordered_json{{"file", cfg.dataset_path->string()}};
    }
    ordered_json train;
    train["hidden_sizes"] = cfg.train.hidden_sizes;
    train["epochs"] = cfg.train.epochs;
    train["batch_size"] = cfg.train.batch_size;
    train["learning_rate"] = cfg.train.learning_rate;
    train["beta1"] = cfg.train.beta1;
    train["beta2"] = cfg.train.beta2;
    train["adam_epsilon"] = cfg.train.adam_epsilon;
    train["seed"] = cfg.train.seed;
    train["deterministic_full_batch"] = cfg.train.deterministic_full_batch;
    j["train"] = std::move(train);
    ordered_json losses = ordered_json::array();
    for (LossId id : cfg.losses) {
        losses.push_back(loss_name(id));
    }
    j["losses"] = std::move(losses);
    j["repetitions"] = cfg.repetitions;
    j["convergence_threshold"] = cfg.convergence_threshold;
    j["output_dir"] = cfg.output_dir.string();
    j["workers"] = cfg.workers;
    return j;
}

// Deliberately excludes wall-clock fields so repeated runs are
// byte-identical; timings go to stdout instead.
void write_json_report(const ExperimentReport& report, const std::filesystem::path& path) {
    ordered_json j;
    j["config"] = config_to_json(report.config);
    ordered_json cells = ordered_json::array();
    for (const auto& cell : report.cells) {
        ordered_json c;
        c["loss"] = loss_name(cell.loss);
        c["repetition"] = cell.repetition;
        c["seed"] = cell.seed;
        c["ok"] = cell.ok;
        if (!cell.ok) {
            c["error"] = cell.error;
        } else {
            c["loss_history"] = cell.loss_history;
            if (cell.convergence_epoch) {
                c["convergence_epoch"] = *cell.convergence_epoch;
            } else {
                c["convergence_epoch"] = nullptr;
            }
            c["train"] = metrics_to_json(cell.train_metrics);
            c["test"] = metrics_to_json(cell.test_metrics);
        }
        cells.push_back(std::move(c));
    }
    j["cells"] = std::move(cells);
    ordered_json aggs = ordered_json::array();
    for (const auto& agg : report.aggregates) {
        ordered_json a;
        a["loss"] = loss_name(agg.loss);
        a["bregman"] = is_bregman(agg.loss);
        a["cells_ok"] = agg.cells_ok;
        a["cells_failed"] = agg.cells_failed;
        a["train_macro_f1"] = stats_to_json(agg.train_macro_f1);
        a["test_macro_f1"] = stats_to_json(agg.test_macro_f1);
        a["train_ndcg"] = stats_to_json(agg.train_ndcg);
        a["test_ndcg"] = stats_to_json(agg.test_ndcg);
        a["train_acc_rank"] = stats_to_json(agg.train_acc_rank);
        a["test_acc_rank"] = stats_to_json(agg.test_acc_rank);
        a["converged_repetitions"] = agg.converged_repetitions;
        if (agg.mean_convergence_epoch) {
            a["mean_convergence_epoch"] = *agg.mean_convergence_epoch;
        } else {
            a["mean_convergence_epoch"] = nullptr;
        }
        aggs.push_back(std::move(a));
    }
    j["aggregates"] = std::move(aggs);

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw FormatError("cannot open '" + path.string() + "' for writing");
    }
    out << j.dump(2) << '\n';
}

void append_metric_ranking(std::ostream& out, const ExperimentReport& report,
                           const std::string& title, MetricStats LossAggregate::*column) {
    out << title << " (test, mean over repetitions):\n";
    std::vector<const LossAggregate*> rows;
    std::vector<const LossAggregate*> failed;
    for (const auto& agg : report.aggregates) {
        (agg.cells_ok > 0 ? rows : failed).push_back(&agg);
    }
    std::sort(rows.begin(), rows.end(), [&](const LossAggregate* a, const LossAggregate* b) {
        const double va = (a->*column).mean;
        const double vb = (b->*column).mean;
        if (va != vb) {
            return va > vb;
        }
        return loss_name(a->loss) < loss_name(b->loss);
    });
    std::size_t rank = 1;
    for (const LossAggregate* agg : rows) {
        out << "  " << rank++ << ". " << loss_name(agg->loss) << "  "
            << format_fixed3(100.0 * (agg->*column).mean) << " +- "
            << format_fixed3(100.0 * (agg->*column).stddev) << "\n";
    }
    for (const LossAggregate* agg : failed) {
        out << "  -  " << loss_name(agg->loss) << "  failed in all repetitions\n";
    }
    out << "\n";
}

} // namespace

void ExperimentConfig::validate() const {
    if (synthetic.has_value() == dataset_path.has_value()) {
        throw InvalidInputError(
            "ExperimentConfig: exactly one dataset source (synthetic or file) is required");
    }
    if (losses.empty()) {
        throw InvalidInputError("ExperimentConfig: losses must be non-empty");
    }
    if (repetitions == 0) {
        throw InvalidInputError("ExperimentConfig: repetitions must be at least 1");
    }
    if (!(convergence_threshold > 0.0)) {
        throw InvalidInputError("ExperimentConfig: convergence_threshold must be positive");
    }
    if (workers == 0) {
        throw InvalidInputError("ExperimentConfig: workers must be at least 1");
    }
    if (output_dir.empty()) {
        throw InvalidInputError("ExperimentConfig: output_dir must be non-empty");
    }
    if (synthetic) {
        synthetic->validate();
    }
    train.validate();
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();

    LabeledDataset base = cfg.synthetic ? generate_synthetic(*cfg.synthetic).dataset
                                        : load_dataset(*cfg.dataset_path);

    ExperimentReport report;
    report.config = cfg;
    report.cells.resize(cfg.losses.size() * cfg.repetitions);

    // Cells are mutually independent and deterministic in their seed, so the
    // schedule does not affect results; slots are preassigned per cell.
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= report.cells.size()) {
                return;
            }
            const LossId loss = cfg.losses[i / cfg.repetitions];
            const std::size_t rep = i % cfg.repetitions;
            report.cells[i] = run_cell(base, cfg, loss, rep);
        }
    };
    const std::size_t worker_count = std::min(cfg.workers, report.cells.size());
    if (worker_count <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(worker_count);
        for (std::size_t i = 0; i < worker_count; ++i) {
            threads.emplace_back(worker);
        }
        for (auto& t : threads) {
            t.join();
        }
    }

    for (std::size_t li = 0; li < cfg.losses.size(); ++li) {
        LossAggregate agg;
        agg.loss = cfg.losses[li];
        std::vector<double> train_f1, test_f1, train_nd, test_nd, train_ar, test_ar;
        std::vector<double> converged_epochs;
        for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
            const CellResult& cell = report.cells[li * cfg.repetitions + rep];
            if (!cell.ok) {
                agg.cells_failed += 1;
                continue;
            }
            agg.cells_ok += 1;
            train_f1.push_back(cell.train_metrics.macro_f1);
            test_f1.push_back(cell.test_metrics.macro_f1);
            train_nd.push_back(cell.train_metrics.ndcg);
            test_nd.push_back(cell.test_metrics.ndcg);
            train_ar.push_back(cell.train_metrics.acc_rank);
            test_ar.push_back(cell.test_metrics.acc_rank);
            if (cell.convergence_epoch) {
                converged_epochs.push_back(static_cast<double>(*cell.convergence_epoch));
            }
        }
        agg.train_macro_f1 = stats_of(train_f1);
        agg.test_macro_f1 = stats_of(test_f1);
        agg.train_ndcg = stats_of(train_nd);
        agg.test_ndcg = stats_of(test_nd);
        agg.train_acc_rank = stats_of(train_ar);
        agg.test_acc_rank = stats_of(test_ar);
        agg.converged_repetitions = converged_epochs.size();
        if (!converged_epochs.empty()) {
            agg.mean_convergence_epoch = mean_of(converged_epochs);
        }
        report.aggregates.push_back(std::move(agg));
    }

    write_report_files(report, cfg.output_dir);
    return report;
}

std::string emit_comparison(const ExperimentReport& report, double threshold) {
    std::ostringstream out;
    out << "Loss comparison over " << report.config.repetitions << " repetition(s), "
        << report.cells.size() << " cell(s)\n\n";

    append_metric_ranking(out, report, "macro F1", &LossAggregate::test_macro_f1);
    append_metric_ranking(out, report, "NDCG", &LossAggregate::test_ndcg);
    append_metric_ranking(out, report, "acc_rank", &LossAggregate::test_acc_rank);

    out << "Convergence ordering (delta threshold " << format_real(threshold) << "):\n";
    struct ConvRow {
        LossId loss;
        std::size_t converged = 0;
        std::size_t usable = 0;
        double mean_epoch = 0.0;
    };
    std::vector<ConvRow> converged;
    std::vector<ConvRow> holdouts; // never converged or fully failed
    for (const auto& agg : report.aggregates) {
        ConvRow row{agg.loss, 0, 0, 0.0};
        double epoch_sum = 0.0;
        for (const auto& cell : report.cells) {
            if (cell.loss != agg.loss || !cell.ok) {
                continue;
            }
            row.usable += 1;
            if (auto epoch = epochs_to_converge(cell.loss_history, threshold)) {
                row.converged += 1;
                epoch_sum += static_cast<double>(*epoch);
            }
        }
        if (row.converged > 0) {
            row.mean_epoch = epoch_sum / static_cast<double>(row.converged);
            converged.push_back(row);
        } else {
            holdouts.push_back(row);
        }
    }
    std::sort(converged.begin(), converged.end(), [](const ConvRow& a, const ConvRow& b) {
        if (a.mean_epoch != b.mean_epoch) {
            return a.mean_epoch < b.mean_epoch;
        }
        return loss_name(a.loss) < loss_name(b.loss);
    });
    std::size_t rank = 1;
    for (const ConvRow& row : converged) {
        out << "  " << rank++ << ". " << loss_name(row.loss) << "  mean epoch "
            << format_fixed3(row.mean_epoch) << "  (" << row.converged << "/" << row.usable
            << " repetitions)\n";
    }
    for (const ConvRow& row : holdouts) {
        out << "  -  " << loss_name(row.loss)
            << (row.usable == 0 ? "  failed in all repetitions\n" : "  not converged\n");
    }
    return std::move(out).str();
}

void write_report_files(const ExperimentReport& report, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_metric_table(dir / "table_macro_f1.csv", report.aggregates,
                       &LossAggregate::train_macro_f1, &LossAggregate::test_macro_f1);
    write_metric_table(dir / "table_ndcg.csv", report.aggregates, &LossAggregate::train_ndcg,
                       &LossAggregate::test_ndcg);
    write_metric_table(dir / "table_acc_rank.csv", report.aggregates,
                       &LossAggregate::train_acc_rank, &LossAggregate::test_acc_rank);
    write_curves(report, dir / "curves_loss.csv", dir / "curves_delta.csv");
    write_convergence(report, dir / "convergence.csv");
    write_json_report(report, dir / "report.json");

    std::ofstream summary(dir / "summary.txt", std::ios::binary);
    if (!summary) {
        throw FormatError("cannot open '" + (dir / "summary.txt").string() + "' for writing");
    }
    summary << emit_comparison(report, report.config.convergence_threshold);
}

} // namespace bregbench
