#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "netml/error.hpp"
#include "netml/rng.hpp"

namespace netml {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class ValueKind { Nominal, Integer, Real, Binary, Timestamp };

inline const char* to_string(ValueKind kind) {
    switch (kind) {
        case ValueKind::Nominal: return "nominal";
        case ValueKind::Integer: return "integer";
        case ValueKind::Real: return "real";
        case ValueKind::Binary: return "binary";
        case ValueKind::Timestamp: return "timestamp";
    }
    return "?";
}

struct FeatureSchema {
    std::string name;
    ValueKind kind = ValueKind::Real;
    std::size_t index = 0;  // column position in the encoded matrix
};

enum class TaskKind { Binary, Multiclass };

inline const char* to_string(TaskKind task) {
    return task == TaskKind::Binary ? "binary" : "multiclass";
}

// Encoded, fully numeric dataset. Immutable after construction: downstream
// stages only ever read it.
struct Dataset {
    std::vector<FeatureSchema> schema;
    Matrix matrix;                     // rows = records, cols = encoded features
    std::vector<int> binary_labels;    // 0 = normal, 1 = anomaly
    std::vector<int> multiclass_labels;
    std::vector<std::string> class_names;  // index 0 is always "Normal"

    std::size_t n_rows() const { return static_cast<std::size_t>(matrix.rows()); }
    std::size_t n_features() const { return static_cast<std::size_t>(matrix.cols()); }
    std::size_t n_classes() const { return class_names.size(); }

    const std::vector<int>& labels(TaskKind task) const {
        return task == TaskKind::Binary ? binary_labels : multiclass_labels;
    }
    std::size_t task_classes(TaskKind task) const {
        return task == TaskKind::Binary ? 2 : class_names.size();
    }

    int feature_index(const std::string& name) const {
        for (const auto& f : schema)
            if (f.name == name) return static_cast<int>(f.index);
        return -1;
    }
};

struct ValidationReport {
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
};

// Report-only invariant check; never mutates the dataset.
inline ValidationReport validate_dataset(const Dataset& d) {
    ValidationReport report;
    auto note = [&report](std::string msg) { report.problems.push_back(std::move(msg)); };

    const std::size_t rows = d.n_rows();
    if (d.schema.size() != d.n_features())
        note("schema lists " + std::to_string(d.schema.size()) + " features but matrix has " +
             std::to_string(d.n_features()) + " columns");
    for (std::size_t i = 0; i < d.schema.size(); ++i) {
        if (d.schema[i].index != i)
            note("schema entry '" + d.schema[i].name + "' has index " +
                 std::to_string(d.schema[i].index) + ", expected " + std::to_string(i));
        for (std::size_t j = i + 1; j < d.schema.size(); ++j)
            if (d.schema[i].name == d.schema[j].name)
                note("duplicate feature name '" + d.schema[i].name + "'");
    }

    if (d.binary_labels.size() != rows)
        note("binary label count " + std::to_string(d.binary_labels.size()) +
             " != row count " + std::to_string(rows));
    if (d.multiclass_labels.size() != rows)
        note("multiclass label count " + std::to_string(d.multiclass_labels.size()) +
             " != row count " + std::to_string(rows));
    if (d.class_names.empty() || d.class_names.front() != "Normal")
        note("class_names[0] must be 'Normal'");

    const std::size_t n_cls = d.class_names.size();
    for (std::size_t r = 0; r < d.multiclass_labels.size(); ++r) {
        const int c = d.multiclass_labels[r];
        if (c < 0 || static_cast<std::size_t>(c) >= n_cls) {
            note("row " + std::to_string(r) + ": multiclass label " + std::to_string(c) +
                 " out of range [0, " + std::to_string(n_cls) + ")");
        }
    }
    for (std::size_t r = 0; r < d.binary_labels.size(); ++r) {
        const int b = d.binary_labels[r];
        if (b != 0 && b != 1)
            note("row " + std::to_string(r) + ": binary label " + std::to_string(b));
    }
    const std::size_t common = std::min(d.binary_labels.size(), d.multiclass_labels.size());
    for (std::size_t r = 0; r < common; ++r) {
        if ((d.binary_labels[r] == 0) != (d.multiclass_labels[r] == 0)) {
            note("row " + std::to_string(r) + ": binary label " +
                 std::to_string(d.binary_labels[r]) + " disagrees with class '" +
                 (static_cast<std::size_t>(d.multiclass_labels[r]) < n_cls
                      ? d.class_names[static_cast<std::size_t>(d.multiclass_labels[r])]
                      : std::string("?")) +
                 "'");
        }
    }

    for (Eigen::Index r = 0; r < d.matrix.rows(); ++r) {
        for (Eigen::Index c = 0; c < d.matrix.cols(); ++c) {
            if (!std::isfinite(d.matrix(r, c))) {
                note("non-finite cell at row " + std::to_string(r) + ", col " +
                     std::to_string(c) +
                     (static_cast<std::size_t>(c) < d.schema.size()
                          ? " (" + d.schema[static_cast<std::size_t>(c)].name + ")"
                          : ""));
            }
        }
    }
    return report;
}

// Row / column gathers used throughout the pipeline.
inline Matrix take_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
    return out;
}

inline Matrix take_cols(const Matrix& m, const std::vector<std::size_t>& cols) {
    Matrix out(m.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j)
        out.col(static_cast<Eigen::Index>(j)) = m.col(static_cast<Eigen::Index>(cols[j]));
    return out;
}

template <typename T>
std::vector<T> take(const std::vector<T>& v, const std::vector<std::size_t>& idx) {
    std::vector<T> out;
    out.reserve(idx.size());
    for (std::size_t i : idx) out.push_back(v[i]);
    return out;
}

}  // namespace netml
