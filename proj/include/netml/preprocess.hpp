#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "netml/dataset.hpp"
#include "netml/ingest.hpp"
#include "netml/rng.hpp"

namespace netml {

enum class UnseenPolicy { Error, ReservedCode };

// Label encoding: one integer code per distinct nominal value. Codes follow
// lexicographic order of the distinct values, so they do not depend on row
// order.
struct EncodingMap {
    std::map<std::string, std::vector<std::string>> values_per_feature;  // code = position
    UnseenPolicy policy = UnseenPolicy::Error;

    bool has_feature(const std::string& name) const {
        return values_per_feature.count(name) != 0;
    }

    double encode(const std::string& feature, const std::string& value) const {
        const auto& values = values_per_feature.at(feature);
        auto it = std::lower_bound(values.begin(), values.end(), value);
        if (it != values.end() && *it == value)
            return static_cast<double>(it - values.begin());
        if (policy == UnseenPolicy::ReservedCode) return static_cast<double>(values.size());
        throw UnseenCategory("feature '" + feature + "': unseen value '" + value + "'");
    }
};

inline EncodingMap fit_label_encoding(const LabeledTable& table,
                                      UnseenPolicy policy = UnseenPolicy::Error) {
    EncodingMap map;
    map.policy = policy;
    for (std::size_t c = 0; c < table.feature_names.size(); ++c) {
        bool numeric = true;
        for (const auto& row : table.rows) {
            if (!csv::parse_number(row[c])) {
                numeric = false;
                break;
            }
        }
        if (numeric) continue;
        std::set<std::string> distinct;
        for (const auto& row : table.rows) distinct.insert(row[c]);
        map.values_per_feature[table.feature_names[c]] =
            std::vector<std::string>(distinct.begin(), distinct.end());
    }
    return map;
}

struct EncodedDataset {
    Dataset dataset;
    EncodingMap encoding;
    std::vector<int> source_file;
    int n_source_files = 1;
};

namespace detail {

inline ValueKind classify_numeric_column(const Matrix& m, Eigen::Index col,
                                         const std::string& name) {
    const std::string lname = netml::detail::lower(name);
    if (lname == "stime" || lname == "ltime") return ValueKind::Timestamp;
    bool integral = true;
    bool binary = true;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const double v = m(r, col);
        if (v != std::floor(v)) integral = false;
        if (v != 0.0 && v != 1.0) binary = false;
        if (!integral && !binary) break;
    }
    if (binary && m.rows() > 0) return ValueKind::Binary;
    return integral ? ValueKind::Integer : ValueKind::Real;
}

}  // namespace detail

// Replaces nominal cells by their codes and parses the rest as reals.
inline EncodedDataset apply_encoding(const EncodingMap& map, const LabeledTable& table) {
    EncodedDataset out;
    out.encoding = map;
    const std::size_t rows = table.n_rows();
    const std::size_t cols = table.feature_names.size();
    out.dataset.matrix.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t c = 0; c < cols; ++c) {
        const std::string& name = table.feature_names[c];
        const bool nominal = map.has_feature(name);
        for (std::size_t r = 0; r < rows; ++r) {
            const std::string& cell = table.rows[r][c];
            if (nominal) {
                out.dataset.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    map.encode(name, cell);
            } else {
                const auto num = csv::parse_number(cell);
                if (!num)
                    throw DataError("row " + std::to_string(r + 1) + ", feature '" + name +
                                    "': cell '" + cell + "' is not numeric");
                out.dataset.matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    *num;
            }
        }
    }

    out.dataset.schema.reserve(cols);
    for (std::size_t c = 0; c < cols; ++c) {
        FeatureSchema f;
        f.name = table.feature_names[c];
        f.index = c;
        f.kind = map.has_feature(f.name)
                     ? ValueKind::Nominal
                     : detail::classify_numeric_column(out.dataset.matrix,
                                                       static_cast<Eigen::Index>(c), f.name);
        out.dataset.schema.push_back(std::move(f));
    }
    out.dataset.binary_labels = table.binary_labels;
    out.dataset.multiclass_labels = table.multiclass_labels;
    out.dataset.class_names = table.class_names;
    out.source_file = table.source_file;
    out.n_source_files = 1;
    for (int f : table.source_file) out.n_source_files = std::max(out.n_source_files, f + 1);
    return out;
}

inline EncodedDataset encode_dataset(const LabeledTable& table,
                                     UnseenPolicy policy = UnseenPolicy::Error) {
    return apply_encoding(fit_label_encoding(table, policy), table);
}

// Per-feature standardization to mean 0, population standard deviation 1,
// fitted on the training rows only.
struct ScalerParams {
    Vector mean;
    Vector std;
};

inline ScalerParams fit_scaler(const Matrix& m, const std::vector<std::size_t>& train_rows) {
    if (train_rows.size() < 2)
        throw EmptyTrainingSet("scaler needs at least 2 training rows, got " +
                               std::to_string(train_rows.size()));
    const Eigen::Index d = m.cols();
    ScalerParams p;
    p.mean = Vector::Zero(d);
    p.std = Vector::Zero(d);
    const double n = static_cast<double>(train_rows.size());
    for (std::size_t r : train_rows) p.mean += m.row(static_cast<Eigen::Index>(r)).transpose();
    p.mean /= n;
    for (std::size_t r : train_rows) {
        const Vector dev = m.row(static_cast<Eigen::Index>(r)).transpose() - p.mean;
        p.std += dev.cwiseProduct(dev);
    }
    p.std = (p.std / n).cwiseSqrt();
    return p;
}

inline Matrix apply_scaler(const ScalerParams& p, const Matrix& m) {
    if (m.cols() != p.mean.size())
        throw DimensionMismatch("scaler fitted on " + std::to_string(p.mean.size()) +
                                " columns, input has " + std::to_string(m.cols()));
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
        if (p.std(c) == 0.0) {
            out.col(c).setZero();  // constant feature carries no information
        } else {
            out.col(c) = (m.col(c).array() - p.mean(c)) / p.std(c);
        }
    }
    return out;
}

// Seeded shuffle followed by round-robin assignment; fold sizes differ by at
// most one and every row lands in exactly one fold.
struct FoldPlan {
    int k = 0;
    std::vector<int> assignments;
    Seed seed;

    std::vector<std::size_t> test_rows(int fold) const {
        std::vector<std::size_t> out;
        for (std::size_t r = 0; r < assignments.size(); ++r)
            if (assignments[r] == fold) out.push_back(r);
        return out;
    }
    std::vector<std::size_t> train_rows(int fold) const {
        std::vector<std::size_t> out;
        for (std::size_t r = 0; r < assignments.size(); ++r)
            if (assignments[r] != fold) out.push_back(r);
        return out;
    }
};

inline FoldPlan make_kfold(std::size_t n_rows, int k, Seed seed) {
    if (k < 2) throw ConfigError("k-fold needs k >= 2, got " + std::to_string(k));
    if (n_rows < static_cast<std::size_t>(k))
        throw TooFewRows(std::to_string(n_rows) + " rows cannot fill " + std::to_string(k) +
                         " folds");
    std::vector<std::size_t> order(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignments.resize(n_rows);
    for (std::size_t i = 0; i < n_rows; ++i)
        plan.assignments[order[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
    return plan;
}

struct OfficialSplit {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
};

// Rows from the last manifest file form the test set; everything before it
// is training data. Requires a multi-file (pre-split) load.
inline OfficialSplit official_split(const EncodedDataset& data) {
    if (data.n_source_files < 2)
        throw SplitUnavailable("official split needs a multi-file load; got " +
                               std::to_string(data.n_source_files) + " file(s)");
    OfficialSplit split;
    const int test_tag = data.n_source_files - 1;
    for (std::size_t r = 0; r < data.source_file.size(); ++r) {
        if (data.source_file[r] == test_tag)
            split.test_rows.push_back(r);
        else
            split.train_rows.push_back(r);
    }
    return split;
}

}  // namespace netml
