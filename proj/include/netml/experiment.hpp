#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "netml/feature_select.hpp"
#include "netml/ingest.hpp"
#include "netml/metrics.hpp"
#include "netml/model_io.hpp"
#include "netml/preprocess.hpp"

namespace netml {

enum class SplitProtocol { KFold, Official };

struct ExperimentConfig {
    DatasetManifest manifest;
    TaskKind task = TaskKind::Binary;
    SplitProtocol split = SplitProtocol::Official;
    int k_folds = 5;
    std::vector<std::size_t> feature_sizes;
    std::vector<ModelSpec> models;
    Seed seed;
    std::filesystem::path output_dir = "netml-out";
    std::size_t svm_cap = 20000;  // applied to every SVM cell in the grid
    MulticlassRanking multiclass_ranking = MulticlassRanking::BinaryTarget;
    int workers = 0;  // 0: hardware concurrency
    std::chrono::seconds cell_timeout{1800};
    std::vector<std::string> formats = {"csv", "md"};
};

inline Json manifest_to_json(const DatasetManifest& m) {
    Json j{{"id", to_string(m.dataset_id)},
           {"has_header", m.has_header},
           {"label_column", m.label_column},
           {"drop_columns", m.drop_columns}};
    Json files = Json::array();
    for (const auto& p : m.file_paths) files.push_back(p.string());
    j["files"] = std::move(files);
    if (m.attack_category_column) j["attack_category_column"] = *m.attack_category_column;
    return j;
}

inline DatasetManifest manifest_from_json(const Json& j) {
    try {
        const DatasetId id = dataset_id_from_string(j.at("id"));
        if (j.contains("dir")) {
            // shorthand: the published pair under one directory
            return id == DatasetId::UnswNb15
                       ? DatasetManifest::unsw_nb15(j.at("dir").get<std::string>())
                       : DatasetManifest::nsl_kdd(j.at("dir").get<std::string>());
        }
        DatasetManifest m;
        m.dataset_id = id;
        for (const auto& f : j.at("files")) m.file_paths.emplace_back(f.get<std::string>());
        m.has_header = j.at("has_header");
        m.label_column = j.at("label_column");
        if (j.contains("attack_category_column"))
            m.attack_category_column = j.at("attack_category_column").get<std::string>();
        if (j.contains("drop_columns"))
            m.drop_columns = j.at("drop_columns").get<std::vector<std::string>>();
        return m;
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("bad dataset manifest: ") + e.what());
    }
}

inline Json config_to_json(const ExperimentConfig& c) {
    Json models = Json::array();
    for (const auto& spec : c.models) models.push_back(spec_to_json(spec));
    Json j{{"dataset", manifest_to_json(c.manifest)},
           {"task", to_string(c.task)},
           {"split", c.split == SplitProtocol::Official
                         ? Json{{"protocol", "official"}}
                         : Json{{"protocol", "kfold"}, {"k", c.k_folds}}},
           {"feature_sizes", c.feature_sizes},
           {"models", std::move(models)},
           {"seed", c.seed.value},
           {"output_dir", c.output_dir.string()},
           {"svm_cap", c.svm_cap},
           {"multiclass_ranking",
            c.multiclass_ranking == MulticlassRanking::BinaryTarget ? "binary" : "one_vs_rest"},
           {"workers", c.workers},
           {"cell_timeout_seconds", c.cell_timeout.count()},
           {"formats", c.formats}};
    return j;
}

inline ExperimentConfig config_from_json(const Json& j) {
    try {
        ExperimentConfig c;
        c.manifest = manifest_from_json(j.at("dataset"));
        const std::string task = j.at("task");
        if (task == "binary") c.task = TaskKind::Binary;
        else if (task == "multiclass") c.task = TaskKind::Multiclass;
        else throw ConfigError("unknown task '" + task + "'");
        if (j.contains("split")) {
            const std::string protocol = j.at("split").at("protocol");
            if (protocol == "official") {
                c.split = SplitProtocol::Official;
            } else if (protocol == "kfold") {
                c.split = SplitProtocol::KFold;
                c.k_folds = j.at("split").contains("k") ? j.at("split").at("k").get<int>() : 5;
            } else {
                throw ConfigError("unknown split protocol '" + protocol + "'");
            }
        }
        c.feature_sizes = j.at("feature_sizes").get<std::vector<std::size_t>>();
        for (const auto& m : j.at("models")) c.models.push_back(spec_from_json(m));
        if (j.contains("seed")) c.seed.value = j.at("seed");
        if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
        if (j.contains("svm_cap")) c.svm_cap = j.at("svm_cap");
        if (j.contains("multiclass_ranking"))
            c.multiclass_ranking = j.at("multiclass_ranking") == "one_vs_rest"
                                       ? MulticlassRanking::OneVsRest
                                       : MulticlassRanking::BinaryTarget;
        if (j.contains("workers")) c.workers = j.at("workers");
        if (j.contains("cell_timeout_seconds"))
            c.cell_timeout = std::chrono::seconds(j.at("cell_timeout_seconds").get<long>());
        if (j.contains("formats")) c.formats = j.at("formats").get<std::vector<std::string>>();
        return c;
    } catch (const Json::exception& e) {
        throw ConfigError(std::string("bad experiment config: ") + e.what());
    }
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ConfigError("'" + path.string() + "': " + e.what());
    }
    return config_from_json(j);
}

struct CellResult {
    std::size_t model_index = 0;
    std::string model_name;
    std::size_t feature_size = 0;
    int fold = -1;  // -1 for the official split
    MetricsReport metrics;
    bool subsampled = false;
    bool converged = true;
    bool timed_out = false;
    std::string error;
    double seconds = 0.0;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    TrainingCurve curve;  // neural cells only

    bool succeeded() const { return error.empty() && !timed_out; }
};

struct SummaryRow {
    std::string model_name;
    std::size_t feature_size = 0;
    int cells_ok = 0;
    double accuracy = 0.0;
    double precision_weighted = 0.0;
    double recall_weighted = 0.0;
    double f1_weighted = 0.0;
};

struct ReportBundle {
    Json config_json;  // resolved config; replayable as-is
    TaskKind task = TaskKind::Binary;
    SplitProtocol split = SplitProtocol::Official;
    int k_folds = 5;
    std::vector<std::string> model_names;  // display names, config order
    std::vector<std::size_t> feature_sizes;
    std::vector<std::string> class_names;
    std::size_t n_rows = 0;
    std::vector<std::size_t> rows_per_file;
    RankedFeatures ranking;
    std::vector<CellResult> cells;

    std::vector<SummaryRow> summarize() const {
        std::vector<SummaryRow> rows;
        for (std::size_t m = 0; m < model_names.size(); ++m) {
            for (std::size_t s = 0; s < feature_sizes.size(); ++s) {
                SummaryRow row;
                row.model_name = model_names[m];
                row.feature_size = feature_sizes[s];
                for (const auto& cell : cells) {
                    if (cell.model_index != m || cell.feature_size != feature_sizes[s] ||
                        !cell.succeeded())
                        continue;
                    ++row.cells_ok;
                    row.accuracy += cell.metrics.accuracy;
                    row.precision_weighted += cell.metrics.precision_weighted;
                    row.recall_weighted += cell.metrics.recall_weighted;
                    row.f1_weighted += cell.metrics.f1_weighted;
                }
                if (row.cells_ok > 0) {
                    const double k = row.cells_ok;
                    row.accuracy /= k;
                    row.precision_weighted /= k;
                    row.recall_weighted /= k;
                    row.f1_weighted /= k;
                }
                rows.push_back(std::move(row));
            }
        }
        return rows;
    }
};

namespace detail {

inline std::vector<std::string> display_names(const std::vector<ModelSpec>& models) {
    std::vector<std::string> names;
    for (const auto& spec : models) {
        std::string base = family_display_name(spec.family());
        std::string name = base;
        int suffix = 2;
        while (std::find(names.begin(), names.end(), name) != names.end())
            name = base + "#" + std::to_string(suffix++);
        names.push_back(std::move(name));
    }
    return names;
}

}  // namespace detail

// Runs the full (model x feature size x fold) grid. Cells execute on a
// worker pool; each one is independently seeded, so the grid result does not
// depend on scheduling. Timeouts mark their cell; other failures propagate
// with the cell named.
inline ReportBundle run_experiment(const ExperimentConfig& config) {
    if (config.models.empty()) throw ConfigError("experiment lists no models");
    if (config.feature_sizes.empty()) throw ConfigError("experiment lists no feature sizes");
    if (config.split == SplitProtocol::KFold && config.k_folds < 2)
        throw ConfigError("k-fold protocol needs k >= 2");

    const RawTable raw = load_raw(config.manifest);
    const LabeledTable labeled = map_labels(raw, config.manifest);
    const EncodedDataset encoded = encode_dataset(labeled);
    const Dataset& dataset = encoded.dataset;
    {
        const ValidationReport report = validate_dataset(dataset);
        if (!report.ok()) {
            std::string msg = "dataset failed validation:";
            for (const auto& p : report.problems) msg += "\n  " + p;
            throw DataError(msg);
        }
    }
    for (std::size_t size : config.feature_sizes)
        if (size < 1 || size > dataset.n_features())
            throw ConfigError("feature size " + std::to_string(size) + " outside [1, " +
                              std::to_string(dataset.n_features()) + "]");

    ReportBundle bundle;
    bundle.config_json = config_to_json(config);
    bundle.task = config.task;
    bundle.split = config.split;
    bundle.k_folds = config.k_folds;
    bundle.model_names = detail::display_names(config.models);
    bundle.feature_sizes = config.feature_sizes;
    bundle.class_names = dataset.class_names;
    bundle.n_rows = dataset.n_rows();
    bundle.rows_per_file.assign(
        static_cast<std::size_t>(encoded.n_source_files), 0);
    for (int f : encoded.source_file) ++bundle.rows_per_file[static_cast<std::size_t>(f)];

    const MulticlassRanking mode = config.task == TaskKind::Multiclass
                                       ? config.multiclass_ranking
                                       : MulticlassRanking::BinaryTarget;
    bundle.ranking = rank_features(dataset, config.task, mode);

    // resolve the split once
    std::vector<int> folds;
    FoldPlan plan;
    OfficialSplit official;
    if (config.split == SplitProtocol::Official) {
        official = official_split(encoded);
        folds.push_back(-1);
    } else {
        plan = make_kfold(dataset.n_rows(), config.k_folds, Seed{Rng(config.seed).fork(0xf01d).origin()});
        for (int f = 0; f < config.k_folds; ++f) folds.push_back(f);
    }

    struct CellJob {
        std::size_t model_index;
        std::size_t size_index;
        int fold;
    };
    std::vector<CellJob> jobs;
    for (std::size_t m = 0; m < config.models.size(); ++m)
        for (std::size_t s = 0; s < config.feature_sizes.size(); ++s)
            for (int fold : folds) jobs.push_back({m, s, fold});

    bundle.cells.resize(jobs.size());
    std::vector<std::exception_ptr> failures(jobs.size());

    auto run_cell = [&](std::size_t job_index) {
        const CellJob& job = jobs[job_index];
        CellResult& cell = bundle.cells[job_index];
        cell.model_index = job.model_index;
        cell.model_name = bundle.model_names[job.model_index];
        cell.feature_size = config.feature_sizes[job.size_index];
        cell.fold = job.fold;

        const auto started = std::chrono::steady_clock::now();
        try {
            const auto columns =
                subset_columns(dataset, select_top(bundle.ranking, cell.feature_size));
            const Matrix subset = take_cols(dataset.matrix, columns);

            const std::vector<std::size_t>& train_rows =
                job.fold < 0 ? official.train_rows : plan.train_rows(job.fold);
            const std::vector<std::size_t> test_rows =
                job.fold < 0 ? official.test_rows : plan.test_rows(job.fold);
            cell.train_rows = train_rows.size();
            cell.test_rows = test_rows.size();

            const ScalerParams scaler = fit_scaler(subset, train_rows);
            const Matrix X_train = apply_scaler(scaler, take_rows(subset, train_rows));
            const Matrix X_test = apply_scaler(scaler, take_rows(subset, test_rows));

            const auto& labels = dataset.labels(config.task);
            const std::vector<int> y_train = take(labels, train_rows);
            const std::vector<int> y_test = take(labels, test_rows);
            const int n_classes = static_cast<int>(dataset.task_classes(config.task));

            ModelSpec spec = config.models[job.model_index];
            spec.seed.value = Rng(config.seed)
                                  .fork(job.model_index, job.size_index,
                                        static_cast<std::uint64_t>(job.fold + 1))
                                  .origin();
            if (auto* svm = std::get_if<SvmParams>(&spec.hyper)) svm->train_cap = config.svm_cap;

            FitContext ctx;
            ctx.deadline = started + config.cell_timeout;

            const TrainedModel model = fit_model(X_train, y_train, n_classes, spec, &ctx);
            const PredictionBatch predictions = predict(model, X_test, &ctx);
            cell.metrics = compute_metrics(
                confusion(y_test, predictions.labels, static_cast<std::size_t>(n_classes)));
            cell.subsampled = model_subsampled(model);
            cell.converged = model_converged(model);
            if (const TrainingCurve* curve = model_curve(model)) cell.curve = *curve;
        } catch (const CellTimeout&) {
            cell.timed_out = true;
            cell.error = "timed out after " + std::to_string(config.cell_timeout.count()) + "s";
        } catch (...) {
            failures[job_index] = std::current_exception();
        }
        cell.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };

    const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_workers =
        std::min(jobs.size(),
                 config.workers > 0 ? static_cast<std::size_t>(config.workers) : hw);
    if (n_workers <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < n_workers; ++w) {
            pool.emplace_back([&]() {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= jobs.size()) break;
                    run_cell(i);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (!failures[i]) continue;
        const auto& cell = bundle.cells[i];
        try {
            std::rethrow_exception(failures[i]);
        } catch (const Error& e) {
            throw Error("grid cell (" + cell.model_name + ", " +
                        std::to_string(cell.feature_size) + " features, fold " +
                        std::to_string(cell.fold) + "): " + e.what());
        } catch (const std::exception& e) {
            throw Error("grid cell (" + cell.model_name + ", " +
                        std::to_string(cell.feature_size) + " features): " + e.what());
        }
    }
    return bundle;
}

// --- report emission -------------------------------------------------------

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoFailure("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw IoFailure("write failed for '" + path.string() + "'");
}

inline std::string fold_tag(int fold) {
    return fold < 0 ? std::string("official") : "fold" + std::to_string(fold);
}

}  // namespace detail

inline Json bundle_to_json(const ReportBundle& bundle) {
    Json ranking = Json::array();
    for (std::size_t i = 0; i < bundle.ranking.size(); ++i) {
        const auto& e = bundle.ranking.at(i);
        ranking.push_back(Json{{"rank", i + 1},
                               {"feature", e.feature},
                               {"r", e.r},
                               {"score", e.score},
                               {"degenerate", e.degenerate}});
    }
    Json cells = Json::array();
    for (const auto& cell : bundle.cells) {
        Json per_class = Json::array();
        for (const auto& pc : cell.metrics.per_class)
            per_class.push_back(Json{{"precision", pc.precision},
                                     {"recall", pc.recall},
                                     {"f1", pc.f1},
                                     {"support", pc.support}});
        Json curve = Json::array();
        for (const auto& e : cell.curve)
            curve.push_back(Json{{"train_loss", e.train_loss},
                                 {"train_accuracy", e.train_accuracy},
                                 {"val_loss", e.val_loss},
                                 {"val_accuracy", e.val_accuracy}});
        cells.push_back(Json{{"model_index", cell.model_index},
                             {"model", cell.model_name},
                             {"feature_size", cell.feature_size},
                             {"fold", cell.fold},
                             {"accuracy", cell.metrics.accuracy},
                             {"precision_weighted", cell.metrics.precision_weighted},
                             {"recall_weighted", cell.metrics.recall_weighted},
                             {"f1_weighted", cell.metrics.f1_weighted},
                             {"precision_macro", cell.metrics.precision_macro},
                             {"recall_macro", cell.metrics.recall_macro},
                             {"f1_macro", cell.metrics.f1_macro},
                             {"per_class", std::move(per_class)},
                             {"subsampled", cell.subsampled},
                             {"converged", cell.converged},
                             {"timed_out", cell.timed_out},
                             {"error", cell.error},
                             {"seconds", cell.seconds},
                             {"train_rows", cell.train_rows},
                             {"test_rows", cell.test_rows},
                             {"curve", std::move(curve)}});
    }
    return Json{{"format", "netml-bundle"},
                {"version", kModelFormatVersion},
                {"config", bundle.config_json},
                {"task", to_string(bundle.task)},
                {"protocol", bundle.split == SplitProtocol::Official ? "official" : "kfold"},
                {"k_folds", bundle.k_folds},
                {"model_names", bundle.model_names},
                {"feature_sizes", bundle.feature_sizes},
                {"class_names", bundle.class_names},
                {"n_rows", bundle.n_rows},
                {"rows_per_file", bundle.rows_per_file},
                {"ranking", std::move(ranking)},
                {"cells", std::move(cells)}};
}

inline ReportBundle bundle_from_json(const Json& j) {
    try {
        if (j.at("format") != "netml-bundle") throw CorruptFile("not a bundle document");
        if (j.at("version") != kModelFormatVersion)
            throw VersionMismatch("bundle version unsupported");
        ReportBundle bundle;
        bundle.config_json = j.at("config");
        bundle.task = j.at("task") == "binary" ? TaskKind::Binary : TaskKind::Multiclass;
        bundle.split =
            j.at("protocol") == "official" ? SplitProtocol::Official : SplitProtocol::KFold;
        bundle.k_folds = j.at("k_folds");
        bundle.model_names = j.at("model_names").get<std::vector<std::string>>();
        bundle.feature_sizes = j.at("feature_sizes").get<std::vector<std::size_t>>();
        bundle.class_names = j.at("class_names").get<std::vector<std::string>>();
        bundle.n_rows = j.at("n_rows");
        bundle.rows_per_file = j.at("rows_per_file").get<std::vector<std::size_t>>();
        for (const auto& e : j.at("ranking")) {
            CorrelationScore score;
            score.feature = e.at("feature");
            score.r = e.at("r");
            score.score = e.at("score");
            score.degenerate = e.at("degenerate");
            bundle.ranking.entries.push_back(std::move(score));
        }
        for (const auto& c : j.at("cells")) {
            CellResult cell;
            cell.model_index = c.at("model_index");
            cell.model_name = c.at("model");
            cell.feature_size = c.at("feature_size");
            cell.fold = c.at("fold");
            cell.metrics.accuracy = c.at("accuracy");
            cell.metrics.precision_weighted = c.at("precision_weighted");
            cell.metrics.recall_weighted = c.at("recall_weighted");
            cell.metrics.f1_weighted = c.at("f1_weighted");
            cell.metrics.precision_macro = c.at("precision_macro");
            cell.metrics.recall_macro = c.at("recall_macro");
            cell.metrics.f1_macro = c.at("f1_macro");
            for (const auto& pc : c.at("per_class")) {
                ClassMetrics m;
                m.precision = pc.at("precision");
                m.recall = pc.at("recall");
                m.f1 = pc.at("f1");
                m.support = pc.at("support");
                cell.metrics.per_class.push_back(m);
            }
            cell.subsampled = c.at("subsampled");
            cell.converged = c.at("converged");
            cell.timed_out = c.at("timed_out");
            cell.error = c.at("error");
            cell.seconds = c.at("seconds");
            cell.train_rows = c.at("train_rows");
            cell.test_rows = c.at("test_rows");
            for (const auto& e : c.at("curve")) {
                EpochStats stats;
                stats.train_loss = e.at("train_loss");
                stats.train_accuracy = e.at("train_accuracy");
                stats.val_loss = e.at("val_loss");
                stats.val_accuracy = e.at("val_accuracy");
                cell.curve.push_back(stats);
            }
            bundle.cells.push_back(std::move(cell));
        }
        return bundle;
    } catch (const Json::exception& e) {
        throw CorruptFile(std::string("malformed bundle: ") + e.what());
    }
}

inline std::string ranking_csv(const RankedFeatures& ranking) {
    std::string out = "rank,feature,score\n";
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += csv::quote(ranking.at(i).feature);
        out += ',';
        out += csv::format_double(ranking.at(i).score);
        out += '\n';
    }
    return out;
}

inline std::string cells_csv(const ReportBundle& bundle) {
    std::string out =
        "model,feature_size,fold,accuracy,precision_weighted,recall_weighted,f1_weighted,"
        "precision_macro,recall_macro,f1_macro,train_rows,test_rows,subsampled,converged,"
        "timed_out,error\n";
    for (const auto& cell : bundle.cells) {
        out += csv::quote(cell.model_name);
        out += ',' + std::to_string(cell.feature_size);
        out += ',' + detail::fold_tag(cell.fold);
        out += ',' + csv::format_double(cell.metrics.accuracy);
        out += ',' + csv::format_double(cell.metrics.precision_weighted);
        out += ',' + csv::format_double(cell.metrics.recall_weighted);
        out += ',' + csv::format_double(cell.metrics.f1_weighted);
        out += ',' + csv::format_double(cell.metrics.precision_macro);
        out += ',' + csv::format_double(cell.metrics.recall_macro);
        out += ',' + csv::format_double(cell.metrics.f1_macro);
        out += ',' + std::to_string(cell.train_rows);
        out += ',' + std::to_string(cell.test_rows);
        out += cell.subsampled ? ",yes" : ",no";
        out += cell.converged ? ",yes" : ",no";
        out += cell.timed_out ? ",yes" : ",no";
        out += ',' + csv::quote(cell.error) + '\n';
    }
    return out;
}

inline std::string summary_csv(const ReportBundle& bundle) {
    std::string out =
        "model,feature_size,folds,accuracy,precision_weighted,recall_weighted,f1_weighted\n";
    for (const auto& row : bundle.summarize()) {
        out += csv::quote(row.model_name);
        out += ',' + std::to_string(row.feature_size);
        out += ',' + std::to_string(row.cells_ok);
        out += ',' + csv::format_double(row.accuracy);
        out += ',' + csv::format_double(row.precision_weighted);
        out += ',' + csv::format_double(row.recall_weighted);
        out += ',' + csv::format_double(row.f1_weighted) + '\n';
    }
    return out;
}

// Accuracy grid shaped like the published comparison tables: one row per
// model, one column per feature-subset size, accuracy in percent.
inline std::string accuracy_table(const ReportBundle& bundle, bool markdown) {
    const auto rows = bundle.summarize();
    auto find = [&rows](const std::string& model, std::size_t size) -> const SummaryRow* {
        for (const auto& r : rows)
            if (r.model_name == model && r.feature_size == size) return &r;
        return nullptr;
    };

    std::string out;
    if (markdown) {
        out += "| Model |";
        for (std::size_t size : bundle.feature_sizes)
            out += " Features (" + std::to_string(size) + ") |";
        out += "\n|---|";
        for (std::size_t i = 0; i < bundle.feature_sizes.size(); ++i) out += "---|";
        out += "\n";
        for (const auto& model : bundle.model_names) {
            out += "| " + model + " |";
            for (std::size_t size : bundle.feature_sizes) {
                const SummaryRow* row = find(model, size);
                out += ' ';
                out += (row && row->cells_ok > 0) ? csv::format_double(row->accuracy * 100.0, 2)
                                                  : std::string("n/a");
                out += " |";
            }
            out += "\n";
        }
    } else {
        out += "model";
        for (std::size_t size : bundle.feature_sizes)
            out += ",features_" + std::to_string(size);
        out += "\n";
        for (const auto& model : bundle.model_names) {
            out += csv::quote(model);
            for (std::size_t size : bundle.feature_sizes) {
                const SummaryRow* row = find(model, size);
                out += ',';
                out += (row && row->cells_ok > 0) ? csv::format_double(row->accuracy * 100.0, 2)
                                                  : std::string("n/a");
            }
            out += "\n";
        }
    }
    return out;
}

inline std::string curve_csv(const TrainingCurve& curve) {
    std::string out = "epoch,train_loss,train_acc,val_loss,val_acc\n";
    for (std::size_t e = 0; e < curve.size(); ++e) {
        out += std::to_string(e + 1);
        out += ',' + csv::format_double(curve[e].train_loss);
        out += ',' + csv::format_double(curve[e].train_accuracy);
        out += ',' + csv::format_double(curve[e].val_loss);
        out += ',' + csv::format_double(curve[e].val_accuracy) + '\n';
    }
    return out;
}

// Writes every report artifact into `out_dir` and returns the paths. CSV and
// Markdown outputs are byte-stable for a given bundle; wall-clock timings
// live only in bundle.json.
inline std::vector<std::filesystem::path> emit_report(const ReportBundle& bundle,
                                                      const std::vector<std::string>& formats,
                                                      const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoFailure("cannot create '" + out_dir.string() + "': " + ec.message());

    const bool want_csv = std::find(formats.begin(), formats.end(), "csv") != formats.end();
    const bool want_md = std::find(formats.begin(), formats.end(), "md") != formats.end();

    std::vector<std::filesystem::path> written;
    auto emit = [&written](const std::filesystem::path& path, const std::string& text) {
        detail::write_text(path, text);
        written.push_back(path);
    };

    if (want_csv) {
        emit(out_dir / "ranked_features.csv", ranking_csv(bundle.ranking));
        emit(out_dir / "cells.csv", cells_csv(bundle));
        emit(out_dir / "summary.csv", summary_csv(bundle));
        emit(out_dir / "accuracy_table.csv", accuracy_table(bundle, false));
        for (const auto& cell : bundle.cells) {
            if (cell.curve.empty()) continue;
            std::string name = "curve_" + cell.model_name + "_" +
                               std::to_string(cell.feature_size) + "_" +
                               detail::fold_tag(cell.fold) + ".csv";
            for (char& ch : name)
                if (ch == '#' || ch == ' ') ch = '-';
            emit(out_dir / name, curve_csv(cell.curve));
        }
    }
    if (want_md) emit(out_dir / "accuracy_table.md", accuracy_table(bundle, true));

    emit(out_dir / "run_manifest.json", bundle.config_json.dump(2) + "\n");
    emit(out_dir / "bundle.json", bundle_to_json(bundle).dump(2) + "\n");
    return written;
}

inline ReportBundle load_bundle(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile("cannot open '" + path.string() + "'");
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw CorruptFile("'" + path.string() + "': " + e.what());
    }
    return bundle_from_json(j);
}

}  // namespace netml
