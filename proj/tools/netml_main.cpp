// Command-line front end: dataset ingestion/summary, feature ranking,
// single-model training and evaluation, and full experiment-grid runs.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "netml/netml.hpp"

namespace {

struct ManifestOptions {
    std::string manifest_path;
    std::string dataset_id;
    std::string dataset_dir;
};

void add_manifest_options(CLI::App* cmd, ManifestOptions& opts) {
    auto* manifest =
        cmd->add_option("--manifest", opts.manifest_path, "dataset manifest JSON file");
    auto* dataset = cmd->add_option("--dataset", opts.dataset_id,
                                    "built-in dataset id (unsw-nb15 or nsl-kdd)");
    auto* dir = cmd->add_option("--dir", opts.dataset_dir,
                                "directory holding the published dataset files");
    dataset->needs(dir);
    manifest->excludes(dataset);
}

netml::DatasetManifest resolve_manifest(const ManifestOptions& opts) {
    if (!opts.manifest_path.empty()) {
        std::ifstream in(opts.manifest_path);
        if (!in) throw netml::ConfigError("cannot open manifest '" + opts.manifest_path + "'");
        netml::Json j;
        try {
            in >> j;
        } catch (const netml::Json::exception& e) {
            throw netml::ConfigError("'" + opts.manifest_path + "': " + e.what());
        }
        return netml::manifest_from_json(j);
    }
    if (opts.dataset_id.empty())
        throw netml::ConfigError("either --manifest or --dataset/--dir is required");
    const netml::DatasetId id = netml::dataset_id_from_string(opts.dataset_id);
    return id == netml::DatasetId::UnswNb15 ? netml::DatasetManifest::unsw_nb15(opts.dataset_dir)
                                            : netml::DatasetManifest::nsl_kdd(opts.dataset_dir);
}

netml::TaskKind parse_task(const std::string& task) {
    if (task == "binary") return netml::TaskKind::Binary;
    if (task == "multiclass") return netml::TaskKind::Multiclass;
    throw netml::ConfigError("task must be 'binary' or 'multiclass'");
}

void print_metrics(const netml::MetricsReport& metrics,
                   const std::vector<std::string>& class_names) {
    std::cout << "accuracy:            " << netml::csv::format_double(metrics.accuracy) << "\n";
    std::cout << "precision (weighted): " << netml::csv::format_double(metrics.precision_weighted)
              << "\n";
    std::cout << "recall (weighted):    " << netml::csv::format_double(metrics.recall_weighted)
              << "\n";
    std::cout << "f1 (weighted):        " << netml::csv::format_double(metrics.f1_weighted)
              << "\n";
    std::cout << "per-class (precision / recall / f1 / support):\n";
    for (std::size_t c = 0; c < metrics.per_class.size(); ++c) {
        const auto& m = metrics.per_class[c];
        const std::string name =
            c < class_names.size() ? class_names[c] : "class " + std::to_string(c);
        std::cout << "  " << name << ": " << netml::csv::format_double(m.precision) << " / "
                  << netml::csv::format_double(m.recall) << " / "
                  << netml::csv::format_double(m.f1) << " / " << m.support << "\n";
    }
}

int cmd_ingest(const ManifestOptions& opts) {
    const auto manifest = resolve_manifest(opts);
    const auto raw = netml::load_raw(manifest);
    const auto labeled = netml::map_labels(raw, manifest);
    const auto encoded = netml::encode_dataset(labeled);
    const auto report = netml::validate_dataset(encoded.dataset);

    std::cout << "dataset:   " << netml::to_string(manifest.dataset_id) << "\n";
    std::cout << "rows:      " << encoded.dataset.n_rows() << "\n";
    for (std::size_t f = 0; f < manifest.file_paths.size(); ++f) {
        std::size_t rows = 0;
        for (int tag : encoded.source_file) rows += tag == static_cast<int>(f);
        std::cout << "  " << manifest.file_paths[f].string() << ": " << rows << " rows\n";
    }
    std::cout << "features:  " << encoded.dataset.n_features() << " ("
              << encoded.encoding.values_per_feature.size() << " nominal)\n";
    std::cout << "classes:\n";
    for (std::size_t c = 0; c < encoded.dataset.class_names.size(); ++c) {
        std::size_t count = 0;
        for (int label : encoded.dataset.multiclass_labels)
            count += label == static_cast<int>(c);
        std::cout << "  " << encoded.dataset.class_names[c] << ": " << count << "\n";
    }
    std::size_t anomalies = 0;
    for (int b : encoded.dataset.binary_labels) anomalies += b;
    std::cout << "anomalies: " << anomalies << " / " << encoded.dataset.n_rows() << "\n";
    if (report.ok()) {
        std::cout << "validation: ok\n";
        return 0;
    }
    std::cout << "validation problems:\n";
    for (const auto& p : report.problems) std::cout << "  " << p << "\n";
    return 2;
}

int cmd_rank(const ManifestOptions& opts, const std::string& task_name, bool one_vs_rest,
             const std::string& out_path) {
    const auto manifest = resolve_manifest(opts);
    const auto task = parse_task(task_name);
    const auto labeled = netml::map_labels(netml::load_raw(manifest), manifest);
    const auto encoded = netml::encode_dataset(labeled);
    const auto ranking = netml::rank_features(encoded.dataset, task,
                                              one_vs_rest ? netml::MulticlassRanking::OneVsRest
                                                          : netml::MulticlassRanking::BinaryTarget);
    const std::string body = netml::ranking_csv(ranking);
    if (out_path.empty() || out_path == "-") {
        std::cout << body;
    } else {
        netml::detail::write_text(out_path, body);
        std::cout << "wrote " << out_path << " (" << ranking.size() << " features)\n";
    }
    return 0;
}

int cmd_train(const ManifestOptions& opts, const std::string& task_name,
              const std::string& family_key, std::size_t size, std::uint64_t seed,
              const std::string& out_path) {
    const auto manifest = resolve_manifest(opts);
    const auto task = parse_task(task_name);
    const auto labeled = netml::map_labels(netml::load_raw(manifest), manifest);
    const auto encoded = netml::encode_dataset(labeled);
    const auto& dataset = encoded.dataset;

    const auto ranking = netml::rank_features(dataset, task);
    if (size == 0) size = dataset.n_features();
    const auto subset = netml::select_top(ranking, size);
    const auto columns = netml::subset_columns(dataset, subset);

    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    if (encoded.n_source_files >= 2) {
        const auto split = netml::official_split(encoded);
        train_rows = split.train_rows;
        test_rows = split.test_rows;
    } else {
        train_rows.resize(dataset.n_rows());
        std::iota(train_rows.begin(), train_rows.end(), std::size_t{0});
    }

    const netml::Matrix subset_matrix = netml::take_cols(dataset.matrix, columns);
    const auto scaler = netml::fit_scaler(subset_matrix, train_rows);
    const netml::Matrix X_train =
        netml::apply_scaler(scaler, netml::take_rows(subset_matrix, train_rows));
    const auto& labels = dataset.labels(task);
    const std::vector<int> y_train = netml::take(labels, train_rows);
    const int n_classes = static_cast<int>(dataset.task_classes(task));

    netml::ModelSpec spec;
    spec.hyper = netml::default_hyper(netml::family_from_key(family_key));
    spec.seed.value = seed;
    std::cout << "training " << netml::family_display_name(spec.family()) << " on "
              << train_rows.size() << " rows x " << size << " features\n";
    const auto model = netml::fit_model(X_train, y_train, n_classes, spec);

    netml::PipelineModel pipeline;
    pipeline.task = task;
    pipeline.class_names = task == netml::TaskKind::Binary
                               ? std::vector<std::string>{"Normal", "Anomaly"}
                               : dataset.class_names;
    pipeline.feature_names = subset.names;
    pipeline.encoding = encoded.encoding;
    pipeline.scaler = scaler;
    pipeline.model = model;
    netml::save_pipeline(out_path, pipeline);
    std::cout << "saved " << out_path << "\n";

    if (!test_rows.empty()) {
        const netml::Matrix X_test =
            netml::apply_scaler(scaler, netml::take_rows(subset_matrix, test_rows));
        const auto predictions = netml::predict(model, X_test);
        const auto metrics = netml::compute_metrics(netml::confusion(
            netml::take(labels, test_rows), predictions.labels,
            static_cast<std::size_t>(n_classes)));
        std::cout << "held-out (official test split):\n";
        print_metrics(metrics, pipeline.class_names);
    }
    return 0;
}

int cmd_evaluate(const ManifestOptions& opts, const std::string& model_path,
                 const std::string& rows_mode) {
    const auto pipeline = netml::load_pipeline(model_path);
    const auto manifest = resolve_manifest(opts);
    auto labeled = netml::map_labels(netml::load_raw(manifest), manifest);

    if (rows_mode == "test" || rows_mode == "train") {
        int n_files = 1;
        for (int tag : labeled.source_file) n_files = std::max(n_files, tag + 1);
        if (n_files < 2)
            throw netml::SplitUnavailable("'" + rows_mode + "' needs a multi-file manifest");
        const int test_tag = n_files - 1;
        netml::LabeledTable filtered;
        filtered.feature_names = labeled.feature_names;
        filtered.class_names = labeled.class_names;
        for (std::size_t r = 0; r < labeled.n_rows(); ++r) {
            const bool is_test = labeled.source_file[r] == test_tag;
            if (is_test != (rows_mode == "test")) continue;
            filtered.rows.push_back(labeled.rows[r]);
            filtered.source_file.push_back(labeled.source_file[r]);
            filtered.binary_labels.push_back(labeled.binary_labels[r]);
            filtered.multiclass_labels.push_back(labeled.multiclass_labels[r]);
        }
        labeled = std::move(filtered);
    }

    const netml::Matrix X = netml::pipeline_features(pipeline, labeled);
    const auto truth = netml::pipeline_labels(pipeline, labeled);
    const auto predictions = netml::predict(pipeline.model, X);
    const auto metrics = netml::compute_metrics(
        netml::confusion(truth, predictions.labels, pipeline.class_names.size()));
    std::cout << "evaluated " << labeled.n_rows() << " rows ("
              << (rows_mode.empty() ? "all" : rows_mode) << ")\n";
    print_metrics(metrics, pipeline.class_names);
    return 0;
}

int cmd_run(const std::string& config_path, std::uint64_t seed, bool seed_set, int workers,
            const std::string& out_dir, const std::vector<std::string>& formats) {
    netml::ExperimentConfig config = netml::load_config(config_path);
    if (seed_set) config.seed.value = seed;
    if (workers > 0) config.workers = workers;
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (!formats.empty()) config.formats = formats;

    const auto bundle = netml::run_experiment(config);
    const auto written = netml::emit_report(bundle, config.formats, config.output_dir);
    std::cout << "grid cells: " << bundle.cells.size() << "\n";
    for (const auto& row : bundle.summarize()) {
        std::cout << "  " << row.model_name << " @" << row.feature_size << " features: ";
        if (row.cells_ok > 0)
            std::cout << "accuracy " << netml::csv::format_double(row.accuracy);
        else
            std::cout << "no successful cells";
        std::cout << "\n";
    }
    for (const auto& path : written) std::cout << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_report(const std::string& bundle_path, const std::string& out_dir,
               const std::vector<std::string>& formats) {
    const auto bundle = netml::load_bundle(bundle_path);
    const auto written = netml::emit_report(
        bundle, formats.empty() ? std::vector<std::string>{"csv", "md"} : formats, out_dir);
    for (const auto& path : written) std::cout << "wrote " << path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"network anomaly / attack classification benchmark pipeline"};
    app.require_subcommand(1);

    ManifestOptions ingest_opts;
    auto* ingest = app.add_subcommand("ingest", "parse dataset files and print a summary");
    add_manifest_options(ingest, ingest_opts);

    ManifestOptions rank_opts;
    std::string rank_task = "binary";
    std::string rank_out;
    bool rank_ovr = false;
    auto* rank = app.add_subcommand("rank", "emit the correlation-ranked feature table");
    add_manifest_options(rank, rank_opts);
    rank->add_option("--task", rank_task, "binary or multiclass")->capture_default_str();
    rank->add_flag("--ovr", rank_ovr, "use one-vs-rest ranking for multiclass");
    rank->add_option("--out", rank_out, "output CSV path ('-' for stdout)");

    ManifestOptions train_opts;
    std::string train_task = "binary";
    std::string train_model = "rf";
    std::size_t train_size = 0;
    std::uint64_t train_seed = 0;
    std::string train_out = "model.json";
    auto* train = app.add_subcommand("train", "train one model and save it");
    add_manifest_options(train, train_opts);
    train->add_option("--task", train_task, "binary or multiclass")->capture_default_str();
    train->add_option("--model", train_model,
                      "family: nb lda knn dt rf svm lr adaboost xgboost sgd ann")
        ->capture_default_str();
    train->add_option("--size", train_size, "top-k feature subset size (0 = all)");
    train->add_option("--seed", train_seed, "random seed")->capture_default_str();
    train->add_option("--out", train_out, "output model path")->capture_default_str();

    ManifestOptions eval_opts;
    std::string eval_model;
    std::string eval_rows = "test";
    auto* evaluate = app.add_subcommand("evaluate", "score a saved model against labeled data");
    add_manifest_options(evaluate, eval_opts);
    evaluate->add_option("--model", eval_model, "saved model path")->required();
    evaluate->add_option("--rows", eval_rows, "test, train, or all")->capture_default_str();

    std::string run_config;
    std::uint64_t run_seed = 0;
    int run_workers = 0;
    std::string run_out;
    std::vector<std::string> run_formats;
    auto* run = app.add_subcommand("run", "run a full experiment from a JSON config");
    run->add_option("--config", run_config, "experiment config JSON")->required();
    auto* run_seed_opt = run->add_option("--seed", run_seed, "override the config seed");
    run->add_option("--workers", run_workers, "worker threads (0 = hardware)");
    run->add_option("--out", run_out, "override the output directory");
    run->add_option("--format", run_formats, "output formats: csv md")->delimiter(',');

    std::string report_bundle;
    std::string report_out = ".";
    std::vector<std::string> report_formats;
    auto* report = app.add_subcommand("report", "re-emit reports from a saved bundle");
    report->add_option("--bundle", report_bundle, "bundle.json from a previous run")->required();
    report->add_option("--out", report_out, "output directory")->capture_default_str();
    report->add_option("--format", report_formats, "output formats: csv md")->delimiter(',');

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(ingest)) return cmd_ingest(ingest_opts);
        if (app.got_subcommand(rank)) return cmd_rank(rank_opts, rank_task, rank_ovr, rank_out);
        if (app.got_subcommand(train))
            return cmd_train(train_opts, train_task, train_model, train_size, train_seed,
                             train_out);
        if (app.got_subcommand(evaluate)) return cmd_evaluate(eval_opts, eval_model, eval_rows);
        if (app.got_subcommand(run))
            return cmd_run(run_config, run_seed, run_seed_opt->count() > 0, run_workers, run_out,
                           run_formats);
        if (app.got_subcommand(report)) return cmd_report(report_bundle, report_out, report_formats);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const netml::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const netml::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
