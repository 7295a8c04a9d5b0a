#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "netml/model_io.hpp"
#include "netml/preprocess.hpp"

namespace netml {

// Everything needed to score raw records with a trained model: the feature
// subset (in model input order), the fitted label encoding and scaler, the
// class vocabulary, and the model itself.
struct PipelineModel {
    TaskKind task = TaskKind::Binary;
    std::vector<std::string> class_names;
    std::vector<std::string> feature_names;
    EncodingMap encoding;
    ScalerParams scaler;
    TrainedModel model;
};

inline Json pipeline_to_json(const PipelineModel& p) {
    Json encoding = Json::object();
    for (const auto& [feature, values] : p.encoding.values_per_feature)
        encoding[feature] = values;
    return Json{{"format", "netml-pipeline"},
                {"version", kModelFormatVersion},
                {"task", to_string(p.task)},
                {"class_names", p.class_names},
                {"feature_names", p.feature_names},
                {"encoding", std::move(encoding)},
                {"unseen_policy",
                 p.encoding.policy == UnseenPolicy::Error ? "error" : "reserved_code"},
                {"scaler", Json{{"mean", io::to_json(p.scaler.mean)},
                                {"std", io::to_json(p.scaler.std)}}},
                {"model", model_to_json(p.model)}};
}

inline PipelineModel pipeline_from_json(const Json& j) {
    try {
        if (j.at("format") != "netml-pipeline") throw CorruptFile("not a pipeline document");
        if (j.at("version") != kModelFormatVersion)
            throw VersionMismatch("pipeline version unsupported");
        PipelineModel p;
        p.task = j.at("task") == "binary" ? TaskKind::Binary : TaskKind::Multiclass;
        p.class_names = j.at("class_names").get<std::vector<std::string>>();
        p.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        for (const auto& [feature, values] : j.at("encoding").items())
            p.encoding.values_per_feature[feature] = values.get<std::vector<std::string>>();
        p.encoding.policy = j.at("unseen_policy") == "reserved_code" ? UnseenPolicy::ReservedCode
                                                                     : UnseenPolicy::Error;
        p.scaler.mean = io::vector_from_json(j.at("scaler").at("mean"));
        p.scaler.std = io::vector_from_json(j.at("scaler").at("std"));
        p.model = model_from_json(j.at("model"));
        return p;
    } catch (const Json::exception& e) {
        throw CorruptFile(std::string("malformed pipeline: ") + e.what());
    }
}

inline void save_pipeline(const std::filesystem::path& path, const PipelineModel& p) {
    std::ofstream out(path);
    if (!out) throw IoFailure("cannot write '" + path.string() + "'");
    out << pipeline_to_json(p).dump(2) << '\n';
    if (!out) throw IoFailure("write failed for '" + path.string() + "'");
}

inline PipelineModel load_pipeline(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile("cannot open '" + path.string() + "'");
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw CorruptFile("'" + path.string() + "': " + e.what());
    }
    return pipeline_from_json(j);
}

// Encodes + scales the pipeline's feature columns out of a labeled table.
// Feature lookup is by name, so the table may carry extra columns.
inline Matrix pipeline_features(const PipelineModel& p, const LabeledTable& table) {
    std::vector<std::size_t> columns;
    for (const auto& name : p.feature_names) {
        const auto it =
            std::find(table.feature_names.begin(), table.feature_names.end(), name);
        if (it == table.feature_names.end())
            throw DataError("input lacks feature '" + name + "'");
        columns.push_back(static_cast<std::size_t>(it - table.feature_names.begin()));
    }
    Matrix m(static_cast<Eigen::Index>(table.n_rows()),
             static_cast<Eigen::Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) {
        const std::string& name = p.feature_names[c];
        const bool nominal = p.encoding.has_feature(name);
        for (std::size_t r = 0; r < table.n_rows(); ++r) {
            const std::string& cell = table.rows[r][columns[c]];
            if (nominal) {
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    p.encoding.encode(name, cell);
            } else {
                const auto num = csv::parse_number(cell);
                if (!num)
                    throw DataError("row " + std::to_string(r + 1) + ", feature '" + name +
                                    "': cell '" + cell + "' is not numeric");
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = *num;
            }
        }
    }
    return apply_scaler(p.scaler, m);
}

// Test labels re-indexed into the pipeline's class vocabulary.
inline std::vector<int> pipeline_labels(const PipelineModel& p, const LabeledTable& table) {
    if (p.task == TaskKind::Binary) return table.binary_labels;
    std::vector<int> remap(table.class_names.size(), -1);
    for (std::size_t c = 0; c < table.class_names.size(); ++c) {
        const auto it =
            std::find(p.class_names.begin(), p.class_names.end(), table.class_names[c]);
        if (it != p.class_names.end())
            remap[c] = static_cast<int>(it - p.class_names.begin());
    }
    std::vector<int> labels(table.multiclass_labels.size());
    for (std::size_t r = 0; r < labels.size(); ++r) {
        const int mapped = remap[static_cast<std::size_t>(table.multiclass_labels[r])];
        if (mapped < 0)
            throw DataError("row " + std::to_string(r + 1) + ": class '" +
                            table.class_names[static_cast<std::size_t>(table.multiclass_labels[r])] +
                            "' unknown to the model");
        labels[r] = mapped;
    }
    return labels;
}

}  // namespace netml
